# Simulation module initialization
