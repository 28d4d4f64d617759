# Compile-pipeline stage implementations.
