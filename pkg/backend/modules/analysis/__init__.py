# Analysis module initialization