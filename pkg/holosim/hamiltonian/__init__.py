# Hamiltonian Package
