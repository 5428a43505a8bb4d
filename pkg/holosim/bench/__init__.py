# Bench Package
