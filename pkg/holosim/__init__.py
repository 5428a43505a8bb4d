# HoloSim Package
"""
HoloSim: pulse-level simulation of holonomic single-qubit gates on a driven three-level system
"""

__version__ = "1.0.0"
