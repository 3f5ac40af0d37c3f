# Special functions module initialization
