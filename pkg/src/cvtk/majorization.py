"""Majorization on probability vectors and its quantum applications.

p majorizes q when every partial sum of p's decreasingly sorted entries
dominates q's.  Operationally: q = D p for some column-stochastic D, and every
concave test function has a smaller sum on p than on q.  Nielsen's theorem
maps deterministic LOCC convertibility of pure bipartite states onto the
relation between their Schmidt-coefficient vectors, and ensemble
decompositions of a density operator exist exactly for weight vectors
majorized by its eigenvalue vector.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence

import numpy as np

from .conventions import xlogx

__all__ = [
    "as_prob_vector",
    "validate_column_stochastic",
    "majorizes",
    "concave_sum_check",
    "apply_column_stochastic",
    "tmsv_schmidt_distribution",
    "tmsv_degradation_matrix",
    "nielsen_transformable",
    "ensemble_realizable",
    "shannon_entropy",
    "DEFAULT_CONCAVE_FAMILY",
]

_CLAMP = 1e-12


def as_prob_vector(p, tol: float = 1e-10) -> np.ndarray:
    """Validate and clean a probability vector.

    Entries below -1e-12 or a total off 1 by more than ``tol`` are rejected;
    tiny negative entries are clamped to zero.
    """
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.size == 0:
        raise ValueError("probability vector must be nonempty")
    if p.min() < -_CLAMP:
        raise ValueError(f"negative probability {p.min():.3e}")
    p = np.clip(p, 0.0, None)
    total = p.sum()
    if abs(total - 1.0) > tol:
        raise ValueError(f"probabilities sum to {total}, expected 1 within {tol:.1e}")
    return p


def _pad_pair(p: np.ndarray, q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Unequal lengths are compared after explicit zero padding.
    d = max(p.size, q.size)
    return np.pad(p, (0, d - p.size)), np.pad(q, (0, d - q.size))


def majorizes(p, q, tol: float = 1e-10, atol: float = 1e-12) -> bool:
    """True iff the sorted partial sums of p dominate those of q (within ``atol``)."""
    p, q = _pad_pair(as_prob_vector(p, tol), as_prob_vector(q, tol))
    cp = np.cumsum(np.sort(p)[::-1])
    cq = np.cumsum(np.sort(q)[::-1])
    return bool(np.all(cp >= cq - atol))


def shannon_entropy(p, base: float = 2.0) -> float:
    return float(-xlogx(as_prob_vector(p), base).sum())


def _neg_entropy(x):
    return -xlogx(x, base=2.0)


DEFAULT_CONCAVE_FAMILY: tuple[Callable, ...] = (
    _neg_entropy,
    np.sqrt,
    lambda x: -np.square(x),
    np.log1p,
)


def concave_sum_check(p, q, h_family: Sequence[Callable] = DEFAULT_CONCAVE_FAMILY, tol: float = 1e-10) -> bool:
    """Property check for p majorizing q: sum h(p_n) <= sum h(q_n) for each concave h.

    This is a test oracle over a fixed function family (entropy, sqrt, -x^2,
    log(1+x)), not a decision procedure; the partial-sum test decides.
    """
    p, q = _pad_pair(as_prob_vector(p, tol), as_prob_vector(q, tol))
    return all(float(np.sum(h(p))) <= float(np.sum(h(q))) + tol for h in h_family)


def validate_column_stochastic(D, col_tol: float = 1e-10) -> np.ndarray:
    """Entries >= 0, columns summing to 1 (within ``col_tol``), rows summing to <= 1."""
    D = np.asarray(D, dtype=float)
    if D.ndim != 2:
        raise ValueError("expected a matrix")
    if D.min() < -_CLAMP:
        raise ValueError(f"negative entry {D.min():.3e}")
    col_err = np.abs(D.sum(axis=0) - 1.0).max()
    if col_err > col_tol:
        raise ValueError(f"column sums deviate from 1 by {col_err:.3e} > {col_tol:.1e}")
    if D.sum(axis=1).max() > 1.0 + max(col_tol, 1e-10):
        raise ValueError("a row sums to more than 1")
    return np.clip(D, 0.0, None)


def apply_column_stochastic(D, p, col_tol: float = 1e-10, prob_tol: float = 1e-10) -> np.ndarray:
    """q = D p; the output is a probability vector majorized by p."""
    D = validate_column_stochastic(D, col_tol)
    p = as_prob_vector(p, prob_tol)
    if D.shape[1] != p.size:
        raise ValueError(f"shape mismatch: D is {D.shape}, p has length {p.size}")
    return np.clip(D @ p, 0.0, None)


def tmsv_schmidt_distribution(lam: float, size: int) -> np.ndarray:
    """Truncated geometric Schmidt distribution p_n = (1 - lam^2) lam^(2n).

    ``lam`` is the tanh of the squeezing parameter; the discarded tail mass is
    lam^(2 size).
    """
    if not 0.0 <= lam < 1.0:
        raise ValueError("lam must lie in [0, 1)")
    n = np.arange(size)
    return (1.0 - lam * lam) * lam ** (2 * n)


def tmsv_degradation_matrix(lam: float, lam_prime: float, size: int) -> np.ndarray:
    """Lower-triangular Toeplitz matrix mapping p(lam') onto p(lam) for lam' < lam.

    First-column entries d_n = (1-lam^2)/(1-lam'^2) [lam^2 - H(n-1) lam'^2]
    lam^(2(n-1)) with the Heaviside convention H(x) = 1 for x >= 0, so
    d_0 = (1-lam^2)/(1-lam'^2).  All entries are nonnegative exactly when
    lam' < lam.  Truncated columns sum to 1 within lam^(2(size-k)) for
    column k; the relation D p(lam') = p(lam) holds exactly row by row.
    """
    if not 0.0 <= lam_prime < lam < 1.0:
        raise ValueError("need 0 <= lam' < lam < 1 (entries would go negative otherwise)")
    if size < 2:
        raise ValueError("size must be >= 2")
    ratio = (1.0 - lam * lam) / (1.0 - lam_prime * lam_prime)
    n = np.arange(size)
    d = ratio * (lam**2 - np.where(n >= 1, lam_prime**2, 0.0)) * lam ** (2 * (n - 1.0))
    out = np.zeros((size, size))
    for k in range(size):
        out[k:, k] = d[: size - k]
    return out


def nielsen_transformable(schmidt_psi, schmidt_phi) -> bool:
    """Deterministic LOCC convertibility psi -> phi: true iff phi's Schmidt vector majorizes psi's."""
    return majorizes(schmidt_phi, schmidt_psi)


def ensemble_realizable(eigenvalues, weights) -> bool:
    """Whether a density operator with the given spectrum admits an ensemble with the given weights."""
    return majorizes(eigenvalues, weights)
