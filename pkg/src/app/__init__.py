# Command-line entry points (qbc).
