"""Entropy and entanglement functionals for Gaussian states.

Von Neumann entropy is a sum of thermal entropies g(nu_j) over the symplectic
spectrum; the entanglement entropy of a pure two-mode state is g(sqrt(det A)).
Partial transposition flips the momentum signs of the transposed modes; its
symplectic spectrum decides the PPT criterion (necessary and sufficient for
one-vs-one-mode Gaussian states) and the logarithmic negativity.
"""

from __future__ import annotations

import dataclasses
from collections.abc import Iterable

import numpy as np

from .conventions import log_in_base, PHYSICALITY_TOL
from .phase_space import GaussianState, assert_physical, symplectic_spectrum
from .unitaries import SymplecticOp, compose, rotation

__all__ = [
    "TwoModeInvariants",
    "StandardForm",
    "PptResult",
    "g_fn",
    "von_neumann_entropy",
    "entanglement_entropy_two_mode",
    "partial_transpose",
    "ppt_separable_1x1",
    "log_negativity",
    "two_mode_invariants",
    "two_mode_symplectic_spectrum",
    "duan_witness",
    "duan_witness_min",
    "standard_form_reduce",
    "as_standard_form",
]


def g_fn(x: float, base: float = 2.0, tol: float = 1e-9) -> float:
    """Thermal entropy as a function of the symplectic eigenvalue.

    g(x) = ((x+1)/2) log((x+1)/2) - ((x-1)/2) log((x-1)/2), with g(1) = 0 via
    the 0 log 0 = 0 limit.  Positive and strictly increasing for x > 1.
    Written in terms of the mean photon number nbar = (x-1)/2 this is
    (nbar+1) log(nbar+1) - nbar log(nbar).
    """
    if x < 1.0 - tol:
        raise ValueError(f"symplectic eigenvalue must be >= 1, got {x}")
    x = max(float(x), 1.0)
    up = (x + 1.0) / 2.0
    dn = (x - 1.0) / 2.0
    out = up * log_in_base(up, base)
    if dn > 0.0:
        out -= dn * log_in_base(dn, base)
    return float(out)


def von_neumann_entropy(state: GaussianState, base: float = 2.0) -> float:
    """Entropy of a Gaussian state: sum of g(nu_j) over the symplectic spectrum."""
    return float(sum(g_fn(nu, base) for nu in symplectic_spectrum(state.cov)))


def _blocks(cov: np.ndarray):
    return cov[0:2, 0:2], cov[2:4, 2:4], cov[0:2, 2:4]


def entanglement_entropy_two_mode(state: GaussianState, base: float = 2.0, purity_tol: float = 1e-6) -> float:
    """Entanglement entropy g(sqrt(det A)) of a *pure* two-mode Gaussian state.

    Mixed inputs are rejected: for them this quantity is not even an
    entanglement monotone.  Symmetry of the bipartition is enforced by
    cross-checking g(sqrt(det A)) against g(sqrt(det B)).
    """
    if state.n_modes != 2:
        raise ValueError("entanglement entropy is defined here for two-mode states")
    spectrum = symplectic_spectrum(state.cov)
    if np.abs(spectrum - 1.0).max() > purity_tol:
        raise ValueError(f"state is mixed (symplectic spectrum {spectrum}); entanglement entropy undefined")
    a_blk, b_blk, _ = _blocks(state.cov)
    ea = g_fn(float(np.sqrt(np.linalg.det(a_blk))), base)
    eb = g_fn(float(np.sqrt(np.linalg.det(b_blk))), base)
    if abs(ea - eb) > 1e-9 * max(1.0, ea):
        raise ValueError(f"bipartition asymmetry: g(sqrt(det A)) = {ea} vs g(sqrt(det B)) = {eb}")
    return ea


def partial_transpose(state: GaussianState, transposed: Iterable[int] = (1,)) -> GaussianState:
    """Momentum sign flip on the transposed modes: rbar -> L rbar, V -> L V L.

    The result is intentionally *not* validated for physicality; whether it is
    physical is exactly the PPT separability test.
    """
    transposed = sorted(set(int(m) for m in transposed))
    if transposed and (transposed[0] < 0 or transposed[-1] >= state.n_modes):
        raise ValueError(f"transposed modes {transposed} out of range")
    lam = np.ones(2 * state.n_modes)
    for m in transposed:
        lam[2 * m + 1] = -1.0
    return GaussianState(lam * state.mean, state.cov * np.outer(lam, lam))


@dataclasses.dataclass(frozen=True)
class PptResult:
    separable: bool
    nu_tilde: np.ndarray

    def __bool__(self) -> bool:
        return self.separable


def ppt_separable_1x1(state: GaussianState, tol: float = PHYSICALITY_TOL) -> PptResult:
    """PPT test for a two-mode Gaussian state; separable iff min nu-tilde >= 1.

    For one-vs-one-mode Gaussian states positivity of the partial transpose is
    necessary *and* sufficient for separability.
    """
    if state.n_modes != 2:
        raise ValueError("the PPT decision applies to two-mode states")
    assert_physical(state)
    nu = symplectic_spectrum(partial_transpose(state, (1,)).cov)
    return PptResult(bool(nu.min() >= 1.0 - tol), nu)


def log_negativity(state: GaussianState, transposed: Iterable[int] = (0,), base: float = 2.0) -> float:
    """Logarithmic negativity sum_j F(nu_tilde_j), F(x) = -log x for x < 1 else 0.

    Default bipartition transposes the first mode against the rest.  Zero for
    PPT states; invariant under local symplectic operations.
    """
    nu = symplectic_spectrum(partial_transpose(state, transposed).cov)
    below = nu[nu < 1.0]
    if below.size == 0:
        return 0.0
    return float(-np.sum(log_in_base(below, base)))


@dataclasses.dataclass(frozen=True)
class TwoModeInvariants:
    """Local symplectic invariants of a two-mode covariance matrix."""

    det_a: float
    det_b: float
    det_c: float
    det_v: float

    @property
    def delta(self) -> float:
        return self.det_a + self.det_b + 2.0 * self.det_c

    @property
    def physical(self) -> bool:
        # Physicality rewritten in invariants: det V >= 1 and Delta <= 1 + det V.
        return self.det_v >= 1.0 - 1e-9 and self.delta <= 1.0 + self.det_v + 1e-9


def two_mode_invariants(cov: np.ndarray) -> TwoModeInvariants:
    cov = np.asarray(cov, dtype=float)
    if cov.shape != (4, 4):
        raise ValueError("expected a 4x4 covariance matrix")
    a_blk, b_blk, c_blk = _blocks(cov)
    return TwoModeInvariants(
        float(np.linalg.det(a_blk)),
        float(np.linalg.det(b_blk)),
        float(np.linalg.det(c_blk)),
        float(np.linalg.det(cov)),
    )


def two_mode_symplectic_spectrum(cov: np.ndarray, tol: float = 1e-9) -> tuple[float, float]:
    """Closed-form two-mode symplectic eigenvalues nu_pm^2 = (Delta pm sqrt(Delta^2 - 4 det V)) / 2."""
    inv = two_mode_invariants(cov)
    delta = inv.delta
    disc = delta * delta - 4.0 * inv.det_v
    scale = max(1.0, abs(delta))
    if disc < -tol * scale * scale:
        raise ValueError(f"Delta^2 - 4 det V = {disc:.3e} < 0: not symmetric-compatible")
    root = np.sqrt(max(disc, 0.0))
    hi = (delta + root) / 2.0
    lo = (delta - root) / 2.0
    if lo < -tol * scale:
        raise ValueError(f"negative nu_minus^2 = {lo:.3e}: not symmetric-compatible")
    return float(np.sqrt(max(hi, 0.0))), float(np.sqrt(max(lo, 0.0)))


@dataclasses.dataclass(frozen=True)
class StandardForm:
    """Two-mode covariance reduced to diag blocks a I2, b I2 and correlation diag(c1, c2).

    ``local_ops`` holds the pair of single-mode symplectic operations that map
    the original state onto the standard form.  Note that the witness below is
    quadrature-convention dependent: relabeling quadratures by local rotations
    changes (c1, c2) jointly with the meaning of the angle phi.
    """

    a: float
    b: float
    c1: float
    c2: float
    local_ops: tuple[SymplecticOp, SymplecticOp] | None = None

    def cov(self) -> np.ndarray:
        return np.array(
            [
                [self.a, 0.0, self.c1, 0.0],
                [0.0, self.a, 0.0, self.c2],
                [self.c1, 0.0, self.b, 0.0],
                [0.0, self.c2, 0.0, self.b],
            ]
        )


def duan_witness(sf: StandardForm, phi: float) -> float:
    """Joint-quadrature variance witness W^phi = a + b + (c2 - c1) cos(2 phi).

    Separable states satisfy W^phi >= 2 for every phi; any phi with
    W^phi < 2 certifies entanglement.
    """
    return float(sf.a + sf.b + (sf.c2 - sf.c1) * np.cos(2.0 * phi))


def duan_witness_min(sf: StandardForm) -> float:
    """Minimum of the witness over phi: a + b - |c2 - c1|."""
    return float(sf.a + sf.b - abs(sf.c2 - sf.c1))


def as_standard_form(state: GaussianState, tol: float = 1e-10) -> StandardForm:
    """Read off (a, b, c1, c2) from a covariance that is already in standard form."""
    if state.n_modes != 2:
        raise ValueError("expected a two-mode state")
    a_blk, b_blk, c_blk = _blocks(state.cov)
    sf = StandardForm(a_blk[0, 0], b_blk[0, 0], c_blk[0, 0], c_blk[1, 1])
    if np.abs(state.cov - sf.cov()).max() > tol:
        raise ValueError("covariance is not in standard form")
    return sf


def _single_mode_normalizer(block: np.ndarray) -> tuple[np.ndarray, float]:
    """Symplectic 2x2 S with S A S^T = sqrt(det A) I (inverse square root of A / nu)."""
    nu = float(np.sqrt(np.linalg.det(block)))
    evals, evecs = np.linalg.eigh(block / nu)
    s = evecs @ np.diag(evals**-0.5) @ evecs.T
    return s, nu


def standard_form_reduce(state: GaussianState) -> StandardForm:
    """Reduce a physical two-mode state to standard form by local symplectics.

    Each diagonal block is first brought to its Williamson form nu I2 by a
    local symplectic (unit-determinant) congruence; local rotations from the
    singular value decomposition of the resulting correlation block then
    diagonalize it.  Convention: c1 >= |c2|, with sign(c1 c2) = sign(det C)
    fixed by the invariant det C.
    """
    if state.n_modes != 2:
        raise ValueError("expected a two-mode state")
    assert_physical(state)
    a_blk, b_blk, c_blk = _blocks(state.cov)
    s1, a = _single_mode_normalizer(a_blk)
    s2, b = _single_mode_normalizer(b_blk)
    c_mid = s1 @ c_blk @ s2.T

    u, _, vt = np.linalg.svd(c_mid)
    v = vt.T
    if np.linalg.det(u) < 0.0:
        u[:, 1] = -u[:, 1]
    if np.linalg.det(v) < 0.0:
        v[:, 1] = -v[:, 1]
    l1 = u.T @ s1
    l2 = v.T @ s2
    d = u.T @ c_mid @ v
    c1, c2 = float(d[0, 0]), float(d[1, 1])
    if c1 < 0.0:
        # A pi rotation of mode 2 flips the sign of both correlations.
        l2 = rotation(np.pi).S @ l2
        c1, c2 = -c1, -c2
    ops = (SymplecticOp(np.zeros(2), l1), SymplecticOp(np.zeros(2), l2))
    return StandardForm(a, b, c1, c2, ops)
