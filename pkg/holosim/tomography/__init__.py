# Tomography Package
