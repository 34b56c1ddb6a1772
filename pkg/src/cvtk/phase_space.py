"""Gaussian states in phase space.

A Gaussian state of N modes is a pair (mean, cov): a real vector of length 2N
holding the quadrature means and a real symmetric 2N x 2N covariance matrix of
the symmetrized second moments, in interleaved ordering (x1, p1, x2, p2, ...).
A covariance matrix is physical iff the Hermitian matrix V + i*Omega is
positive semidefinite, equivalently iff every symplectic eigenvalue is >= 1.
"""

from __future__ import annotations

import dataclasses
from collections.abc import Iterable

import numpy as np

from .conventions import (
    NumericalError,
    PHYSICALITY_TOL,
    PhysicalityError,
    SYMMETRY_TOL,
)

__all__ = [
    "GaussianState",
    "PhysicalityReport",
    "omega",
    "symplectic_spectrum",
    "is_physical",
    "assert_physical",
    "mean_photon_number",
    "characteristic_fn",
    "wigner_fn",
    "partial_trace",
    "product",
    "vacuum",
    "thermal",
    "coherent",
    "squeezed",
    "tmsv",
]


def omega(n_modes: int) -> np.ndarray:
    """Symplectic form of ``n_modes`` modes: block-diagonal [[0, 1], [-1, 0]].

    Satisfies Omega^T = -Omega, Omega^2 = -I, Omega^{-1} = -Omega, and its
    entries are exactly 0 and +-1.
    """
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    out = np.zeros((2 * n_modes, 2 * n_modes))
    for j in range(n_modes):
        out[2 * j, 2 * j + 1] = 1.0
        out[2 * j + 1, 2 * j] = -1.0
    return out


def _frozen_array(value, shape=None) -> np.ndarray:
    arr = np.array(value, dtype=float)
    if shape is not None and arr.shape != shape:
        raise ValueError(f"expected shape {shape}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclasses.dataclass(frozen=True)
class GaussianState:
    """Mean vector and covariance matrix of a Gaussian state.

    The covariance matrix is symmetrized on construction; asymmetry beyond
    ``SYMMETRY_TOL`` is rejected.  Physicality is *not* enforced here (partial
    transposition legitimately produces unphysical instances); use
    :func:`is_physical` / :func:`assert_physical`.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        cov = np.asarray(self.cov, dtype=float)
        if mean.size == 0 or mean.size % 2:
            raise ValueError("mean vector length must be a positive even number")
        if cov.shape != (mean.size, mean.size):
            raise ValueError(f"covariance shape {cov.shape} does not match mean length {mean.size}")
        asym = np.abs(cov - cov.T).max()
        if asym > SYMMETRY_TOL:
            raise ValueError(f"covariance asymmetry {asym:.3e} exceeds {SYMMETRY_TOL:.1e}")
        cov = 0.5 * (cov + cov.T)
        object.__setattr__(self, "mean", _frozen_array(mean))
        object.__setattr__(self, "cov", _frozen_array(cov))

    @property
    def n_modes(self) -> int:
        return self.mean.size // 2


@dataclasses.dataclass(frozen=True)
class PhysicalityReport:
    """Outcome of a physicality check, with its numerical evidence."""

    physical: bool
    min_eigenvalue: float
    symplectic_spectrum: np.ndarray

    def __bool__(self) -> bool:
        return self.physical


def symplectic_spectrum(cov: np.ndarray, pair_rtol: float = 1e-8) -> np.ndarray:
    """Symplectic eigenvalues of a symmetric matrix, sorted descending.

    Computed as the absolute values of the eigenvalues of i*Omega*V, which
    come in +-nu pairs; pairs are matched by magnitude and averaged.  A
    relative mismatch beyond ``pair_rtol`` means the input is not compatible
    with a symmetric covariance matrix.
    """
    cov = np.asarray(cov, dtype=float)
    n = cov.shape[0] // 2
    eig = np.linalg.eigvals(1j * omega(n) @ cov)
    mags = np.sort(np.abs(eig))[::-1]
    pairs = mags.reshape(n, 2)
    scale = max(1.0, mags[0])
    if np.any(np.abs(pairs[:, 0] - pairs[:, 1]) > pair_rtol * scale):
        raise NumericalError("symplectic eigenvalue pairing failed; input is not a valid symmetric covariance")
    return pairs.mean(axis=1)


def is_physical(state: GaussianState, tol: float = PHYSICALITY_TOL) -> PhysicalityReport:
    """Check V + i*Omega >= -tol; the report also carries the symplectic spectrum."""
    n = state.n_modes
    herm = state.cov + 1j * omega(n)
    min_eig = float(np.linalg.eigvalsh(herm).min())
    try:
        spectrum = symplectic_spectrum(state.cov)
    except NumericalError:
        spectrum = np.full(n, np.nan)
    return PhysicalityReport(min_eig >= -tol, min_eig, spectrum)


def assert_physical(state: GaussianState, tol: float = PHYSICALITY_TOL, context: str = "state") -> PhysicalityReport:
    report = is_physical(state, tol)
    if not report:
        raise PhysicalityError(
            f"{context} is unphysical: min eig(V + i*Omega) = {report.min_eigenvalue:.3e} < -{tol:.1e}"
        )
    return report


def mean_photon_number(state: GaussianState) -> float:
    """Total mean photon number tr(V)/4 + |rbar|^2/4 - N/2."""
    return float(np.trace(state.cov) / 4 + state.mean @ state.mean / 4 - state.n_modes / 2)


def characteristic_fn(state: GaussianState, s) -> complex:
    """Characteristic function chi(s) = exp(-s^T Omega V Omega^T s / 8 + i rbar^T Omega s / 2).

    chi(0) = 1 and |chi| <= 1 for physical states.  The linear-term
    coefficient is fixed by chi(s) = tr(D(s) rho) together with the Fourier
    pairing with the Wigner function, and is cross-checked against the
    Fock-space oracle in the test suite.
    """
    s = np.asarray(s, dtype=float).reshape(-1)
    if s.size != 2 * state.n_modes:
        raise ValueError(f"phase-space point has length {s.size}, expected {2 * state.n_modes}")
    om = omega(state.n_modes)
    os_ = om @ s
    quad = -0.125 * (os_ @ state.cov @ os_)
    lin = 0.5j * (state.mean @ os_)
    return complex(np.exp(quad + lin))


def wigner_fn(state: GaussianState, r) -> np.ndarray | float:
    """Gaussian Wigner density at phase-space point(s) ``r``.

    ``r`` may be a single point of length 2N or an array whose last axis has
    length 2N; the result is scalar or shaped like ``r`` without its last
    axis.  Strictly positive.  A singular covariance is rejected: degenerate
    (infinitely squeezed) covariances are outside the physical state space.
    """
    r = np.asarray(r, dtype=float)
    n = state.n_modes
    if r.shape[-1] != 2 * n:
        raise ValueError(f"phase-space point has length {r.shape[-1]}, expected {2 * n}")
    sign, logdet = np.linalg.slogdet(state.cov)
    if sign <= 0 or logdet < -700.0:
        raise NumericalError(f"covariance is singular or indefinite (sign={sign}, logdet={logdet:.3e})")
    delta = r - state.mean
    sol = np.linalg.solve(state.cov, delta[..., :, np.newaxis])[..., 0]
    quad = np.einsum("...i,...i->...", delta, sol)
    norm = (2.0 * np.pi) ** n * np.exp(0.5 * logdet)
    out = np.exp(-0.5 * quad) / norm
    return out if out.ndim else float(out)


def _mode_indices(modes: Iterable[int], n_modes: int) -> list[int]:
    modes = sorted(set(int(m) for m in modes))
    if not modes:
        raise ValueError("mode index set must be nonempty")
    if modes[0] < 0 or modes[-1] >= n_modes:
        raise ValueError(f"mode indices {modes} out of range for {n_modes} modes")
    return modes


def partial_trace(state: GaussianState, keep: Iterable[int]) -> GaussianState:
    """Reduced state on the ``keep`` modes (0-based, returned in ascending order).

    In phase space this is just the restriction of the mean vector and the
    covariance matrix to the kept rows and columns.
    """
    modes = _mode_indices(keep, state.n_modes)
    idx = np.concatenate([[2 * m, 2 * m + 1] for m in modes])
    return GaussianState(state.mean[idx], state.cov[np.ix_(idx, idx)])


def product(*states: GaussianState) -> GaussianState:
    """Tensor product of uncorrelated Gaussian states (direct sum in phase space)."""
    if not states:
        raise ValueError("need at least one state")
    mean = np.concatenate([s.mean for s in states])
    dim = mean.size
    cov = np.zeros((dim, dim))
    at = 0
    for s in states:
        d = s.mean.size
        cov[at : at + d, at : at + d] = s.cov
        at += d
    return GaussianState(mean, cov)


def vacuum(n_modes: int = 1) -> GaussianState:
    return GaussianState(np.zeros(2 * n_modes), np.eye(2 * n_modes))


def thermal(nbar: float) -> GaussianState:
    """Single-mode thermal state with mean photon number ``nbar``: V = (2 nbar + 1) I."""
    if nbar < 0:
        raise ValueError("nbar must be >= 0")
    return GaussianState(np.zeros(2), (2.0 * nbar + 1.0) * np.eye(2))


def coherent(x: float, p: float) -> GaussianState:
    """Coherent state with displacement (x, p); alpha = (x + i p) / 2."""
    return GaussianState(np.array([x, p], dtype=float), np.eye(2))


def squeezed(r: float) -> GaussianState:
    """Squeezed vacuum with V = diag(e^{-2r}, e^{2r}); r > 0 squeezes x."""
    return GaussianState(np.zeros(2), np.diag([np.exp(-2.0 * r), np.exp(2.0 * r)]))


def tmsv(r: float) -> GaussianState:
    """Two-mode squeezed vacuum: cosh(2r) on the diagonal blocks, -Z sinh(2r) off-diagonal."""
    ch, sh = np.cosh(2.0 * r), np.sinh(2.0 * r)
    z = np.diag([1.0, -1.0])
    i2 = np.eye(2)
    cov = np.block([[ch * i2, -sh * z], [-sh * z, ch * i2]])
    return GaussianState(np.zeros(4), cov)
