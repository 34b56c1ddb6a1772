"""Gaussian unitaries as symplectic matrices plus displacements.

A Gaussian unitary acts on quadrature means and covariances as
rbar -> S rbar + d, V -> S V S^T with S symplectic (S Omega S^T = Omega).
This module provides the standard single- and two-mode generators, their
composition and application, and the Williamson and Euler (Bloch-Messiah)
decompositions.
"""

from __future__ import annotations

import dataclasses
from collections.abc import Sequence

import numpy as np
import scipy.linalg

from .conventions import NumericalError, SYMPLECTIC_TOL
from .phase_space import GaussianState, omega

__all__ = [
    "SymplecticOp",
    "WilliamsonDecomposition",
    "EulerDecomposition",
    "identity_op",
    "displacement",
    "squeezer",
    "rotation",
    "beam_splitter",
    "two_mode_squeezer",
    "apply",
    "compose",
    "inverse",
    "is_passive",
    "embed",
    "direct_sum",
    "orthogonal_symplectic_from_unitary",
    "random_symplectic",
    "williamson",
    "standard_form_williamson",
    "euler_decompose",
]


def symplectic_defect(S: np.ndarray) -> float:
    n = S.shape[0] // 2
    om = omega(n)
    return float(np.abs(S @ om @ S.T - om).max())


@dataclasses.dataclass(frozen=True)
class SymplecticOp:
    """A Gaussian unitary (d, S): displacement vector and symplectic matrix."""

    d: np.ndarray
    S: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float).reshape(-1)
        S = np.asarray(self.S, dtype=float)
        if d.size == 0 or d.size % 2:
            raise ValueError("displacement length must be a positive even number")
        if S.shape != (d.size, d.size):
            raise ValueError(f"matrix shape {S.shape} does not match displacement length {d.size}")
        defect = symplectic_defect(S)
        if defect > SYMPLECTIC_TOL:
            raise ValueError(f"matrix is not symplectic: |S Omega S^T - Omega| = {defect:.3e}")
        d.setflags(write=False)
        S = S.copy()
        S.setflags(write=False)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "S", S)

    @property
    def n_modes(self) -> int:
        return self.d.size // 2


def identity_op(n_modes: int = 1) -> SymplecticOp:
    return SymplecticOp(np.zeros(2 * n_modes), np.eye(2 * n_modes))


def displacement(alpha_x: float, alpha_p: float) -> SymplecticOp:
    """Phase-space translation by (x_alpha, p_alpha); S = I."""
    return SymplecticOp(np.array([alpha_x, alpha_p], dtype=float), np.eye(2))


def squeezer(r: float) -> SymplecticOp:
    """Single-mode squeezer Q(r) = diag(e^{-r}, e^{r}); r > 0 squeezes x."""
    return SymplecticOp(np.zeros(2), np.diag([np.exp(-r), np.exp(r)]))


def rotation(theta: float) -> SymplecticOp:
    """Phase-space rotation: X -> X cos(theta) + P sin(theta)."""
    c, s = np.cos(theta), np.sin(theta)
    return SymplecticOp(np.zeros(2), np.array([[c, s], [-s, c]]))


def beam_splitter(beta: float) -> SymplecticOp:
    """Two-mode beam splitter with transmissivity cos^2(beta).

    X1 -> X1 cos(beta) - X2 sin(beta), X2 -> X2 cos(beta) + X1 sin(beta), and
    identically for the momenta; all four 2x2 blocks are proportional to the
    identity (the trigonometric, not hyperbolic, cosine).
    """
    c, s = np.cos(beta), np.sin(beta)
    i2 = np.eye(2)
    S = np.block([[c * i2, -s * i2], [s * i2, c * i2]])
    return SymplecticOp(np.zeros(4), S)


def two_mode_squeezer(r: float) -> SymplecticOp:
    """Two-mode squeezer: I cosh(r) diagonal blocks, -Z sinh(r) off-diagonal blocks."""
    ch, sh = np.cosh(r), np.sinh(r)
    z = np.diag([1.0, -1.0])
    i2 = np.eye(2)
    S = np.block([[ch * i2, -sh * z], [-sh * z, ch * i2]])
    return SymplecticOp(np.zeros(4), S)


def apply(op: SymplecticOp, state: GaussianState) -> GaussianState:
    """Transform a state: rbar -> S rbar + d, V -> S V S^T."""
    if op.n_modes != state.n_modes:
        raise ValueError(f"operation acts on {op.n_modes} modes, state has {state.n_modes}")
    return GaussianState(op.S @ state.mean + op.d, op.S @ state.cov @ op.S.T)


def compose(op2: SymplecticOp, op1: SymplecticOp) -> SymplecticOp:
    """Composition op2 after op1: S = S2 S1, d = S2 d1 + d2."""
    if op2.n_modes != op1.n_modes:
        raise ValueError("mode counts differ")
    return SymplecticOp(op2.S @ op1.d + op2.d, op2.S @ op1.S)


def inverse(op: SymplecticOp) -> SymplecticOp:
    """Inverse Gaussian unitary; S^{-1} = -Omega S^T Omega by symplecticity."""
    om = omega(op.n_modes)
    s_inv = -om @ op.S.T @ om
    return SymplecticOp(-s_inv @ op.d, s_inv)


def is_passive(op: SymplecticOp, tol: float = 1e-9) -> bool:
    """True iff the unitary conserves photon number: d = 0 and S orthogonal."""
    if np.linalg.norm(op.d) > tol:
        return False
    return float(np.abs(op.S.T @ op.S - np.eye(op.S.shape[0])).max()) <= tol


def direct_sum(*ops: SymplecticOp) -> SymplecticOp:
    d = np.concatenate([op.d for op in ops])
    S = scipy.linalg.block_diag(*[op.S for op in ops])
    return SymplecticOp(d, S)


def embed(op: SymplecticOp, n_modes: int, modes: Sequence[int]) -> SymplecticOp:
    """Embed a k-mode operation onto the listed target modes of an n-mode system."""
    modes = [int(m) for m in modes]
    if len(modes) != op.n_modes or len(set(modes)) != len(modes):
        raise ValueError(f"need {op.n_modes} distinct target modes, got {modes}")
    if min(modes) < 0 or max(modes) >= n_modes:
        raise ValueError(f"target modes {modes} out of range for {n_modes} modes")
    S = np.eye(2 * n_modes)
    d = np.zeros(2 * n_modes)
    for a, ma in enumerate(modes):
        d[2 * ma : 2 * ma + 2] = op.d[2 * a : 2 * a + 2]
        for b, mb in enumerate(modes):
            S[2 * ma : 2 * ma + 2, 2 * mb : 2 * mb + 2] = op.S[2 * a : 2 * a + 2, 2 * b : 2 * b + 2]
    return SymplecticOp(d, S)


def orthogonal_symplectic_from_unitary(U: np.ndarray) -> SymplecticOp:
    """Passive N-mode operation (interferometer) from an N x N unitary on the mode operators."""
    U = np.asarray(U, dtype=complex)
    n = U.shape[0]
    S = np.zeros((2 * n, 2 * n))
    for j in range(n):
        for k in range(n):
            re, im = U[j, k].real, U[j, k].imag
            S[2 * j : 2 * j + 2, 2 * k : 2 * k + 2] = np.array([[re, -im], [im, re]])
    return SymplecticOp(np.zeros(2 * n), S)


def random_symplectic(n_modes: int, rng: np.random.Generator, max_squeeze: float = 1.5) -> SymplecticOp:
    """Random symplectic built as passive * squeezers * passive (Haar-ish passives)."""

    def haar_unitary():
        z = rng.normal(size=(n_modes, n_modes)) + 1j * rng.normal(size=(n_modes, n_modes))
        q, r = np.linalg.qr(z)
        return q * (np.diagonal(r) / np.abs(np.diagonal(r)))

    k = orthogonal_symplectic_from_unitary(haar_unitary())
    l = orthogonal_symplectic_from_unitary(haar_unitary())
    rs = rng.uniform(-max_squeeze, max_squeeze, size=n_modes)
    mid = direct_sum(*[squeezer(r) for r in rs])
    return compose(k, compose(mid, l))


@dataclasses.dataclass(frozen=True)
class WilliamsonDecomposition:
    """V = W diag(nu_1 I2, ..., nu_N I2) W^T with W symplectic, spectrum descending."""

    W: np.ndarray
    spectrum: np.ndarray

    def reconstruct(self) -> np.ndarray:
        d = np.repeat(self.spectrum, 2)
        return self.W @ np.diag(d) @ self.W.T


def _canonical_antisymmetric_schur(K: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthogonal Q and positive block values nu with K = Q (+ nu_j Omega_2) Q^T, nu descending."""
    n = K.shape[0] // 2
    T, Q = scipy.linalg.schur(K, output="real")
    nus = np.empty(n)
    for j in range(n):
        b = T[2 * j, 2 * j + 1]
        if b < 0.0:
            # Swap the pair's columns so the superdiagonal entry is positive.
            Q[:, [2 * j, 2 * j + 1]] = Q[:, [2 * j + 1, 2 * j]]
            b = -b
        nus[j] = b
    order = np.argsort(nus)[::-1]
    col_order = np.concatenate([[2 * j, 2 * j + 1] for j in order])
    return Q[:, col_order], nus[order]


def williamson(V: np.ndarray) -> WilliamsonDecomposition:
    """Williamson normal form of a symmetric positive-definite matrix.

    Pipeline: M = V^{1/2} Omega V^{1/2} is antisymmetric; its real Schur form
    Q^T M Q consists of blocks nu_j * [[0, 1], [-1, 0]], and
    W = V^{1/2} Q diag(nu)^{-1/2} is symplectic with V = W V_diag W^T.  This
    route stays stable under degenerate symplectic spectra (e.g. pure states),
    unlike pairing eigenvectors of i Omega V.
    """
    V = np.asarray(V, dtype=float)
    n = V.shape[0] // 2
    if V.shape != (2 * n, 2 * n) or np.abs(V - V.T).max() > SYMPLECTIC_TOL:
        raise ValueError("V must be symmetric of even dimension")
    evals, evecs = np.linalg.eigh(V)
    if evals.min() <= 0.0:
        raise ValueError(f"V must be positive definite (min eigenvalue {evals.min():.3e})")

    # Already in normal form (diagonal with equal pairs): keep W a permutation.
    diag = np.diagonal(V)
    if np.abs(V - np.diag(diag)).max() < 1e-14 and np.abs(diag[0::2] - diag[1::2]).max() < 1e-14:
        nus = diag[0::2].copy()
        order = np.argsort(nus)[::-1]
        W = np.zeros_like(V)
        for new, old in enumerate(order):
            W[2 * old, 2 * new] = 1.0
            W[2 * old + 1, 2 * new + 1] = 1.0
        return WilliamsonDecomposition(W, nus[order])

    sq = evecs @ np.diag(np.sqrt(evals)) @ evecs.T
    K = sq @ omega(n) @ sq
    Q, nus = _canonical_antisymmetric_schur(K)
    W = sq @ Q @ np.diag(1.0 / np.sqrt(np.repeat(nus, 2)))
    return WilliamsonDecomposition(W, nus)


def standard_form_williamson(a: float, b: float, c: float) -> tuple[np.ndarray, float, float]:
    """Explicit Williamson matrix for a standard-form two-mode covariance with c1 = -c2 = c > 0.

    Returns (W, nu_plus, nu_minus) with
    nu_pm = (sqrt((a+b)^2 - 4 c^2) +- (b - a)) / 2 and W built from
    omega_pm^2 = ((a+b)/sqrt((a+b)^2 - 4c^2) +- 1) / 2 as diagonal blocks
    omega_+ I2 and off-diagonal blocks omega_- Z.  The block algebra fixes
    the reconstruction order to V = W diag(nu_-, nu_-, nu_+, nu_+) W^T
    (immaterial for a = b, where nu_+ = nu_-).
    """
    disc = (a + b) ** 2 - 4.0 * c * c
    if disc <= 0.0:
        raise ValueError("(a+b)^2 - 4c^2 must be positive")
    root = np.sqrt(disc)
    nu_plus = (root + (b - a)) / 2.0
    nu_minus = (root - (b - a)) / 2.0
    wp = np.sqrt(((a + b) / root + 1.0) / 2.0)
    wm = np.sqrt(((a + b) / root - 1.0) / 2.0)
    z = np.diag([1.0, -1.0])
    i2 = np.eye(2)
    W = np.block([[wp * i2, wm * z], [wm * z, wp * i2]])
    return W, float(nu_plus), float(nu_minus)


@dataclasses.dataclass(frozen=True)
class EulerDecomposition:
    """S = K (+ Q(r_j)) L with K, L orthogonal symplectic and r_j >= 0 descending."""

    K: np.ndarray
    squeeze_params: np.ndarray
    L: np.ndarray

    def middle(self) -> np.ndarray:
        return np.diag(np.ravel([[np.exp(-r), np.exp(r)] for r in self.squeeze_params]))

    def reconstruct(self) -> np.ndarray:
        return self.K @ self.middle() @ self.L


def _sign_fix(v: np.ndarray) -> np.ndarray:
    # Deterministic eigenvector sign: largest-magnitude component positive.
    return -v if v[np.argmax(np.abs(v))] < 0.0 else v


def _symplectic_gram_schmidt_null(basis: np.ndarray, om: np.ndarray) -> list[np.ndarray]:
    """Orthonormal symplectic pairs (v, -Omega v) spanning an Omega-invariant subspace."""
    out: list[np.ndarray] = []
    B = basis
    while B.shape[1] > 0:
        v = _sign_fix(B[:, 0] / np.linalg.norm(B[:, 0]))
        w = -om @ v
        out.append(v)
        out.append(w)
        proj = B - np.outer(v, v @ B) - np.outer(w, w @ B)
        u, s, _ = np.linalg.svd(proj, full_matrices=False)
        B = u[:, s > 0.5]
    return out


def euler_decompose(S: np.ndarray, zero_tol: float = 1e-9) -> EulerDecomposition:
    """Euler (Bloch-Messiah) decomposition of a symplectic matrix.

    Polar-style construction: P = (S S^T)^{1/2} is symmetric positive-definite
    symplectic and O = P^{-1} S is orthogonal symplectic.  X = log(P) is
    symmetric and anticommutes with Omega, so its -r eigenvectors v pair with
    +r eigenvectors -Omega v; assembling those pairs into K gives
    P = K (+ Q(r_j)) K^T and L = K^T O.  Squeeze parameters are reported
    nonnegative (signs absorbed into K and L) and sorted descending.
    """
    S = np.asarray(S, dtype=float)
    defect = symplectic_defect(S)
    if defect > SYMPLECTIC_TOL:
        raise ValueError(f"input is not symplectic: defect {defect:.3e}")
    n = S.shape[0] // 2
    om = omega(n)

    mu, E = np.linalg.eigh(S @ S.T)
    if mu.min() <= 0.0:
        raise NumericalError("S S^T is not positive definite")
    half_log = 0.5 * np.log(mu)

    pairs: list[tuple[float, np.ndarray]] = []
    null_vecs = []
    for lam, vec in zip(half_log, E.T):
        if lam < -zero_tol:
            pairs.append((-lam, _sign_fix(vec)))
        elif abs(lam) <= zero_tol:
            null_vecs.append(vec)
    if null_vecs:
        paired = _symplectic_gram_schmidt_null(np.array(null_vecs).T, om)
        for j in range(0, len(paired), 2):
            pairs.append((0.0, paired[j]))
    if len(pairs) != n:
        raise NumericalError(f"eigenvalue pairing produced {len(pairs)} pairs, expected {n}")

    pairs.sort(key=lambda item: -item[0])
    cols = []
    rs = []
    for r, v in pairs:
        rs.append(r)
        cols.append(v)
        cols.append(-om @ v)
    K = np.array(cols).T
    P_inv = E @ np.diag(1.0 / np.sqrt(mu)) @ E.T
    L = K.T @ (P_inv @ S)
    return EulerDecomposition(K, np.array(rs), L)
