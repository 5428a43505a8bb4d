# Propagation Package
