# Visualization module initialization