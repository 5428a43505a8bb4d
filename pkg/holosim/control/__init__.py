# Control Package
