"""
Error types raised by HoloSim
"""
from typing import List, Optional

import numpy as np


class HoloSimError(Exception):
    """Base class for all HoloSim failures"""


class InvalidInputError(HoloSimError, ValueError):
    """Input violates a numeric precondition (non-Hermitian generator, wrong shape, ...)"""


class OutOfRangeError(HoloSimError, ValueError):
    """Time or parameter outside the allowed interval"""


class InvalidNoiseModelError(HoloSimError, ValueError):
    """Relaxation/dephasing times that imply a negative pure-dephasing rate"""


class GateNotFoundError(HoloSimError, KeyError):
    """Unknown named gate"""


class HighLeakageError(HoloSimError):
    """Projected qubit block lost too much population to the auxiliary level"""

    def __init__(self, leakage: float, block: np.ndarray):
        super().__init__(f"Leakage {leakage:.3e} exceeds the unitarization threshold")
        self.leakage = leakage
        self.block = block


class BranchLostError(HoloSimError):
    """Followed eigenstate could not be tracked between adjacent steps"""

    def __init__(self, step: int, overlap: float):
        super().__init__(f"Branch tracking lost at step {step} (overlap {overlap:.3f})")
        self.step = step
        self.overlap = overlap


class ConfigError(HoloSimError):
    """Run configuration could not be parsed or validated"""

    def __init__(self, message: str, keys: Optional[List[str]] = None):
        super().__init__(message)
        self.keys = keys or []


class ReconstructionWarning(UserWarning):
    """Linear-inversion process matrix is noticeably non-physical"""
