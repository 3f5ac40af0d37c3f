# Processors module initialization