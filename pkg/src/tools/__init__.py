# Numerical and graph tools for QB-net compilation.
