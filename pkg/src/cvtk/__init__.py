"""Continuous-variable quantum information toolkit.

Gaussian states, symplectic unitaries, Gaussian channels, conditional
measurements, entanglement diagnostics, and majorization utilities, all in
the [X, P] = 2i convention (vacuum variance 1, interleaved x/p ordering),
cross-validated by a truncated Fock-space engine (:mod:`cvtk.fock`).
"""

from . import channels, circuits, conventions, entanglement, fock, majorization, measurements, phase_space, unitaries
from .conventions import NumericalError, PhysicalityError
from .phase_space import GaussianState, omega

__all__ = [
    "GaussianState",
    "NumericalError",
    "PhysicalityError",
    "channels",
    "circuits",
    "conventions",
    "entanglement",
    "fock",
    "majorization",
    "measurements",
    "omega",
    "phase_space",
    "unitaries",
]

__version__ = "0.1.0"
