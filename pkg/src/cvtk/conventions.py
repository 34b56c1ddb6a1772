"""Shared conventions, tolerances, and error types.

Quadrature convention used throughout the package: dimensionless quadratures
X, P with commutator [X, P] = 2i.  In this scaling the vacuum state has unit
variance in both quadratures (covariance matrix = identity), a coherent state
|alpha> sits at mean vector (2 Re alpha, 2 Im alpha), and the total mean
photon number of an N-mode state (rbar, V) is

    <N> = tr(V)/4 + |rbar|^2/4 - N/2.

Beware: the common hbar = 1 convention (vacuum variance 1/2) differs from
this one by a factor of 2 in every covariance matrix.

Mode ordering is interleaved, (x1, p1, x2, p2, ...).  Conversions to the
xxpp ordering are intentionally not provided.

Entropic quantities take a ``base`` argument restricted to 2 (bits, the
default) or e (nats).
"""

from __future__ import annotations

import math

import numpy as np

# Default tolerance for physicality checks (V + i*Omega >= -tol).
PHYSICALITY_TOL = 1e-9

# Maximum asymmetry |V - V^T| accepted (and silently symmetrized away) when
# constructing covariance matrices.
SYMMETRY_TOL = 1e-9

# Symplectic defect |S Omega S^T - Omega| accepted when constructing or
# applying symplectic operations.
SYMPLECTIC_TOL = 1e-8

LOG_BASES = (2.0, math.e)


class PhysicalityError(ValueError):
    """An input state or channel violates the uncertainty relation."""


class NumericalError(RuntimeError):
    """A numerical operation failed (singular matrix, pairing failure, ...)."""


def require_log_base(base: float) -> float:
    if not any(abs(base - b) < 1e-12 for b in LOG_BASES):
        raise ValueError(f"log base must be 2 or e, got {base}")
    return float(base)


def log_in_base(x, base: float = 2.0):
    """Elementwise log in the configured base (2 or e)."""
    require_log_base(base)
    if abs(base - 2.0) < 1e-12:
        return np.log2(x)
    return np.log(x)


def xlogx(x, base: float = 2.0):
    """x * log(x) with the 0 log 0 = 0 limit, elementwise."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0.0
    out[pos] = x[pos] * log_in_base(x[pos], base)
    return out
