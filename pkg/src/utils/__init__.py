# Logging, timing and the exception hierarchy
