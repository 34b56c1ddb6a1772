"""Gaussian channels as (K, N) matrix pairs.

A Gaussian channel transforms rbar -> K rbar + d and V -> K V K^T + N; it is
a valid trace-preserving quantum operation iff N is symmetric and
N + i*Omega - i K Omega K^T >= 0.  The phase-insensitive single-mode family
(K = sqrt(tau) I, N = mu I with mu >= |tau - 1|) covers pure loss and the
quantum-limited amplifier as its extremal members.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .conventions import PHYSICALITY_TOL, PhysicalityError, SYMMETRY_TOL
from .phase_space import GaussianState, omega
from .unitaries import SymplecticOp

__all__ = [
    "GaussianChannel",
    "ChannelReport",
    "PhaseInsensitiveParams",
    "validate_channel",
    "assert_valid_channel",
    "apply_channel",
    "compose_channels",
    "phase_insensitive",
    "pure_loss",
    "quantum_limited_amp",
    "compose_phase_insensitive",
    "channel_from_dilation",
]


@dataclasses.dataclass(frozen=True)
class GaussianChannel:
    """Channel data (K, N, d); N is symmetrized on construction."""

    K: np.ndarray
    Nmat: np.ndarray
    d: np.ndarray = None

    def __post_init__(self):
        K = np.asarray(self.K, dtype=float)
        N = np.asarray(self.Nmat, dtype=float)
        dim = K.shape[0]
        if K.shape != (dim, dim) or dim % 2:
            raise ValueError(f"K must be square of even dimension, got {K.shape}")
        if N.shape != K.shape:
            raise ValueError(f"N shape {N.shape} does not match K shape {K.shape}")
        if np.abs(N - N.T).max() > SYMMETRY_TOL:
            raise ValueError("noise matrix N must be symmetric")
        N = 0.5 * (N + N.T)
        d = np.zeros(dim) if self.d is None else np.asarray(self.d, dtype=float).reshape(-1)
        if d.size != dim:
            raise ValueError(f"displacement length {d.size} does not match dimension {dim}")
        for arr, name in ((K, "K"), (N, "Nmat"), (d, "d")):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_modes(self) -> int:
        return self.K.shape[0] // 2


@dataclasses.dataclass(frozen=True)
class ChannelReport:
    """Validity verdict with the minimum eigenvalue of N + i*Omega - i K Omega K^T."""

    valid: bool
    min_eigenvalue: float
    single_mode_det_ok: bool | None = None

    def __bool__(self) -> bool:
        return self.valid


def validate_channel(ch: GaussianChannel, tol: float = PHYSICALITY_TOL) -> ChannelReport:
    """Check complete positivity; single-mode channels also get the determinant cross-check.

    For N = 1 the eigenvalue condition is equivalent to N >= 0 together with
    det N >= (det K - 1)^2; both forms are evaluated and reported.
    """
    om = omega(ch.n_modes)
    herm = ch.Nmat + 1j * om - 1j * ch.K @ om @ ch.K.T
    min_eig = float(np.linalg.eigvalsh(herm).min())
    det_ok = None
    if ch.n_modes == 1:
        n_psd = float(np.linalg.eigvalsh(ch.Nmat).min()) >= -tol
        det_ok = bool(n_psd and np.linalg.det(ch.Nmat) >= (np.linalg.det(ch.K) - 1.0) ** 2 - tol)
    return ChannelReport(bool(min_eig >= -tol), min_eig, det_ok)


def assert_valid_channel(ch: GaussianChannel, tol: float = PHYSICALITY_TOL) -> ChannelReport:
    report = validate_channel(ch, tol)
    if not report:
        raise PhysicalityError(
            f"invalid Gaussian channel: min eig(N + i Omega - i K Omega K^T) = {report.min_eigenvalue:.3e}"
        )
    return report


def apply_channel(ch: GaussianChannel, state: GaussianState) -> GaussianState:
    """rbar -> K rbar + d, V -> K V K^T + N.  The channel is validated first."""
    if ch.n_modes != state.n_modes:
        raise ValueError(f"channel acts on {ch.n_modes} modes, state has {state.n_modes}")
    assert_valid_channel(ch)
    return GaussianState(ch.K @ state.mean + ch.d, ch.K @ state.cov @ ch.K.T + ch.Nmat)


def compose_channels(ch2: GaussianChannel, ch1: GaussianChannel) -> GaussianChannel:
    """Composition ch2 after ch1: (K2 K1, K2 N1 K2^T + N2, K2 d1 + d2)."""
    if ch2.n_modes != ch1.n_modes:
        raise ValueError("mode counts differ")
    return GaussianChannel(
        ch2.K @ ch1.K,
        ch2.K @ ch1.Nmat @ ch2.K.T + ch2.Nmat,
        ch2.K @ ch1.d + ch2.d,
    )


@dataclasses.dataclass(frozen=True)
class PhaseInsensitiveParams:
    """Gain/attenuation tau and added noise mu of a rotation-invariant channel."""

    tau: float
    mu: float

    def __post_init__(self):
        if self.tau < 0.0:
            raise ValueError(f"tau must be >= 0, violated: tau = {self.tau} < 0")
        if self.mu < abs(self.tau - 1.0) - 1e-12:
            raise ValueError(f"mu >= |tau - 1| violated: mu = {self.mu} < |{self.tau} - 1| = {abs(self.tau - 1.0)}")

    def channel(self) -> GaussianChannel:
        return GaussianChannel(np.sqrt(self.tau) * np.eye(2), self.mu * np.eye(2))


def phase_insensitive(tau: float, mu: float) -> GaussianChannel:
    """Channel with K = sqrt(tau) I and N = mu I; requires mu >= |tau - 1|."""
    return PhaseInsensitiveParams(tau, mu).channel()


def pure_loss(T: float) -> GaussianChannel:
    """Pure-loss channel with transmissivity T: (tau, mu) = (T, 1 - T); identity at T = 1."""
    if not 0.0 <= T <= 1.0:
        raise ValueError(f"transmissivity must satisfy 0 <= T <= 1, violated: T = {T}")
    return phase_insensitive(T, 1.0 - T)


def quantum_limited_amp(G: float) -> GaussianChannel:
    """Quantum-limited amplifier with gain G: (tau, mu) = (G, G - 1); identity at G = 1."""
    if G < 1.0:
        raise ValueError(f"gain must satisfy G >= 1, violated: G = {G}")
    return phase_insensitive(G, G - 1.0)


def compose_phase_insensitive(loss_T: float, amp_G: float) -> PhaseInsensitiveParams:
    """Parameters of the pure-loss / quantum-limited-amplifier concatenation.

    Matrix algebra fixes the operator order: applying the loss first and the
    amplifier second gives K = sqrt(T G) I and
    N = G (1 - T) I + (G - 1) I, i.e. tau = T G, mu = G(1 - T) + (G - 1).
    (The opposite order would give mu = T(G - 1) + (1 - T).)  The returned
    parameters always satisfy mu >= |tau - 1|.
    """
    if not 0.0 <= loss_T <= 1.0:
        raise ValueError(f"transmissivity must satisfy 0 <= T <= 1, violated: T = {loss_T}")
    if amp_G < 1.0:
        raise ValueError(f"gain must satisfy G >= 1, violated: G = {amp_G}")
    return PhaseInsensitiveParams(loss_T * amp_G, amp_G * (1.0 - loss_T) + (amp_G - 1.0))


def channel_from_dilation(S_joint: SymplecticOp, n_env: int) -> GaussianChannel:
    """Channel obtained from a joint unitary with the environment modes in vacuum.

    With the joint symplectic matrix blocked as [[S_S, S_SE], [S_ES, S_E]]
    (system first, then ``n_env`` environment modes), the reduced map has
    K = S_S and N = S_SE S_SE^T.
    """
    if not 1 <= n_env < S_joint.n_modes:
        raise ValueError(f"need 1 <= n_env < {S_joint.n_modes}, got {n_env}")
    n_sys = 2 * (S_joint.n_modes - n_env)
    S = S_joint.S
    K = S[:n_sys, :n_sys]
    S_se = S[:n_sys, n_sys:]
    ch = GaussianChannel(K, S_se @ S_se.T, S_joint.d[:n_sys])
    assert_valid_channel(ch)
    return ch
