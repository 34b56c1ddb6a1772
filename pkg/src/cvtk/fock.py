"""Truncated Fock-space engine, the package's independent ground truth.

Everything here works with explicit matrices in the number basis truncated at
a per-mode cutoff (dimension cutoff + 1), so Gaussian-path results can be
cross-checked against brute-force linear algebra.  Constructors refuse
silently lossy truncation: the probability mass beyond the cutoff must stay
inside an explicit tail budget, and the accepted deficit is recorded on the
returned object rather than hidden by renormalization.
"""

from __future__ import annotations

import dataclasses
from collections.abc import Iterable, Sequence

import numpy as np
import scipy.linalg
from scipy.special import comb, eval_laguerre, gammaln

from .conventions import log_in_base, xlogx

__all__ = [
    "FockPure",
    "FockDensity",
    "SchmidtDecomposition",
    "FockOnOff",
    "ladder_ops",
    "number_basis_state",
    "coherent",
    "squeezed_vacuum",
    "tmsv",
    "thermal",
    "displacement_matrix",
    "squeeze_matrix",
    "rotation_matrix",
    "beam_splitter_matrix",
    "two_mode_squeeze_matrix",
    "gaussian_unitary_matrix",
    "mollow_efficiency",
    "photodetect_povm",
    "number_wigner",
    "wavefunction",
    "wavefunction_table",
    "x_quadrature_density",
    "to_density",
    "tensor",
    "apply_unitary",
    "partial_trace_fock",
    "partial_transpose_fock",
    "expect",
    "vn_entropy",
    "trace_norm",
    "log_negativity_fock",
    "schmidt",
    "on_off_probabilities",
    "homodyne_condition",
    "homodyne_moments",
]

PURE_TAIL_BUDGET = 1e-12
THERMAL_TAIL_BUDGET = 1e-10


@dataclasses.dataclass(frozen=True)
class FockPure:
    """Pure state amplitudes, one tensor axis per mode, with the recorded truncation deficit."""

    amplitudes: np.ndarray
    cutoff: int
    deficit: float = 0.0

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        dim = self.cutoff + 1
        if any(s != dim for s in amp.shape):
            raise ValueError(f"amplitude tensor shape {amp.shape} does not match cutoff {self.cutoff}")
        amp = amp.copy()
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def n_modes(self) -> int:
        return self.amplitudes.ndim

    @property
    def dim(self) -> int:
        return self.cutoff + 1

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def normalized(self) -> "FockPure":
        return FockPure(self.amplitudes / np.sqrt(self.norm_squared()), self.cutoff, self.deficit)


@dataclasses.dataclass(frozen=True)
class FockDensity:
    """Density matrix on (cutoff + 1)^n_modes dimensions with recorded trace deficit."""

    matrix: np.ndarray
    cutoff: int
    n_modes: int = 1
    deficit: float = 0.0

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        dim = (self.cutoff + 1) ** self.n_modes
        if mat.shape != (dim, dim):
            raise ValueError(f"matrix shape {mat.shape} does not match dimension {dim}")
        if np.abs(mat - mat.T.conj()).max() > 1e-12 * max(1.0, np.abs(mat).max()):
            raise ValueError("density matrix must be Hermitian")
        mat = 0.5 * (mat + mat.T.conj())
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.cutoff + 1

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def normalized(self) -> "FockDensity":
        return FockDensity(self.matrix / self.trace(), self.cutoff, self.n_modes, self.deficit)


def ladder_ops(cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    """Annihilation and creation matrices; [a, a+] = I except the last diagonal entry."""
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    a = np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), 1)
    return a, a.T.copy()


def number_basis_state(n: int, cutoff: int) -> FockPure:
    if not 0 <= n <= cutoff:
        raise ValueError(f"need 0 <= n <= cutoff, got n={n}, cutoff={cutoff}")
    amp = np.zeros(cutoff + 1, dtype=complex)
    amp[n] = 1.0
    return FockPure(amp, cutoff)


def _check_tail(deficit: float, budget: float, what: str) -> float:
    if deficit > budget:
        raise ValueError(f"{what}: truncation tail {deficit:.3e} exceeds budget {budget:.1e}; raise the cutoff")
    return max(float(deficit), 0.0)


def coherent(alpha: complex, cutoff: int, tail_budget: float = PURE_TAIL_BUDGET) -> FockPure:
    """Coherent state amplitudes e^{-|alpha|^2/2} alpha^n / sqrt(n!).

    This is the expansion forced by a|alpha> = alpha|alpha>; the eigenvalue
    relation is verified in the test suite.
    """
    if alpha == 0:
        return number_basis_state(0, cutoff)
    n = np.arange(cutoff + 1)
    mag = np.exp(-0.5 * abs(alpha) ** 2 + n * np.log(abs(alpha)) - 0.5 * gammaln(n + 1.0))
    amp = mag * np.exp(1j * np.angle(alpha) * n)
    deficit = _check_tail(1.0 - float(np.sum(mag**2)), tail_budget, f"coherent({alpha})")
    return FockPure(amp, cutoff, deficit)


def squeezed_vacuum(r: float, cutoff: int, tail_budget: float = PURE_TAIL_BUDGET) -> FockPure:
    """Squeezed vacuum: even amplitudes (-tanh r)^n sqrt((2n)!) / (2^n n! sqrt(cosh r)).

    Only even number states appear.  The (-tanh r)^n sign alternation is
    fixed by the generator exp(r(a^2 - a+^2)/2) (equivalently by
    <X^2> = e^{-2r}); magnitudes follow the usual closed form.
    """
    if r == 0:
        return number_basis_state(0, cutoff)
    amp = np.zeros(cutoff + 1)
    n_half = np.arange(cutoff // 2 + 1)
    log_mag = (
        n_half * np.log(np.tanh(abs(r)))
        + 0.5 * gammaln(2 * n_half + 1.0)
        - n_half * np.log(2.0)
        - gammaln(n_half + 1.0)
        - 0.5 * np.log(np.cosh(r))
    )
    signs = np.where(n_half % 2 == 0, 1.0, -1.0) if r > 0 else np.ones_like(log_mag)
    amp[2 * n_half] = signs * np.exp(log_mag)
    deficit = _check_tail(1.0 - float(np.sum(amp**2)), tail_budget, f"squeezed_vacuum({r})")
    return FockPure(amp.astype(complex), cutoff, deficit)


def tmsv(r: float, cutoff: int, tail_budget: float = PURE_TAIL_BUDGET) -> FockPure:
    """Two-mode squeezed vacuum: amplitudes (-tanh r)^n / cosh(r) on |n, n>.

    Schmidt coefficients are the geometric distribution (1 - tanh^2 r) tanh^{2n} r.
    """
    t = np.tanh(r)
    n = np.arange(cutoff + 1)
    diag = (-t) ** n / np.cosh(r)
    amp = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    amp[n, n] = diag
    deficit = _check_tail(1.0 - float(np.sum(np.abs(diag) ** 2)), tail_budget, f"tmsv({r})")
    return FockPure(amp, cutoff, deficit)


def thermal(nbar: float, cutoff: int, tail_budget: float = THERMAL_TAIL_BUDGET) -> FockDensity:
    """Thermal state with Bose-Einstein weights nbar^n / (1 + nbar)^(n+1)."""
    if nbar < 0:
        raise ValueError("nbar must be >= 0")
    n = np.arange(cutoff + 1)
    with np.errstate(divide="ignore"):
        weights = np.exp(n * np.log(nbar) - (n + 1.0) * np.log1p(nbar)) if nbar > 0 else np.where(n == 0, 1.0, 0.0)
    deficit = _check_tail(1.0 - float(weights.sum()), tail_budget, f"thermal({nbar})")
    return FockDensity(np.diag(weights.astype(complex)), cutoff, 1, deficit)


# ---------------------------------------------------------------------------
# Gaussian unitaries as truncated matrix exponentials


def displacement_matrix(alpha: complex, cutoff: int) -> np.ndarray:
    """exp(alpha a+ - conj(alpha) a)."""
    a, ad = ladder_ops(cutoff)
    return scipy.linalg.expm(alpha * ad - np.conj(alpha) * a)


def squeeze_matrix(r: float, cutoff: int) -> np.ndarray:
    """exp(r (a^2 - a+^2) / 2); squeezes the x quadrature for r > 0."""
    a, ad = ladder_ops(cutoff)
    return scipy.linalg.expm(0.5 * r * (a @ a - ad @ ad))


def rotation_matrix(theta: float, cutoff: int) -> np.ndarray:
    """exp(-i theta a+ a); diagonal, hence evaluated exactly."""
    return np.diag(np.exp(-1j * theta * np.arange(cutoff + 1)))


def _two_mode_ladders(cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    a, _ = ladder_ops(cutoff)
    eye = np.eye(cutoff + 1)
    return np.kron(a, eye), np.kron(eye, a)


def two_mode_squeeze_matrix(r: float, cutoff: int) -> np.ndarray:
    """exp(r (a1 a2 - a1+ a2+))."""
    a1, a2 = _two_mode_ladders(cutoff)
    gen = a1 @ a2
    return scipy.linalg.expm(r * (gen - gen.T.conj()))


def beam_splitter_matrix(beta: float, cutoff: int) -> np.ndarray:
    """exp(beta (a1 a2+ - a1+ a2)); transmissivity cos^2(beta)."""
    a1, a2 = _two_mode_ladders(cutoff)
    gen = a1 @ a2.T.conj()
    return scipy.linalg.expm(beta * (gen - gen.T.conj()))


_UNITARY_BUILDERS = {
    "displacement": lambda cutoff, x, p: displacement_matrix((x + 1j * p) / 2.0, cutoff),
    "squeezer": lambda cutoff, r: squeeze_matrix(r, cutoff),
    "rotation": lambda cutoff, theta: rotation_matrix(theta, cutoff),
    "beam_splitter": lambda cutoff, beta: beam_splitter_matrix(beta, cutoff),
    "two_mode_squeezer": lambda cutoff, r: two_mode_squeeze_matrix(r, cutoff),
}


def gaussian_unitary_matrix(kind: str, cutoff: int, **params) -> np.ndarray:
    """Truncated unitary for a named generator; see ``_UNITARY_BUILDERS`` for the catalog."""
    try:
        builder = _UNITARY_BUILDERS[kind]
    except KeyError:
        raise ValueError(f"unsupported generator {kind!r}; known: {sorted(_UNITARY_BUILDERS)}") from None
    return builder(cutoff, **params)


# ---------------------------------------------------------------------------
# Photodetection


def mollow_efficiency(kappa: float, T: float) -> float:
    """Quantum efficiency eta = 1 - exp(-kappa T) of finite-time photodetection."""
    if kappa < 0 or T < 0:
        raise ValueError("kappa and T must be >= 0")
    return float(-np.expm1(-kappa * T))


def photodetect_povm(eta: float, cutoff: int) -> list[np.ndarray]:
    """POVM of an efficiency-eta photon counter: diagonal elements Pi_n.

    Pi_n has diagonal entries C(m, n) eta^n (1 - eta)^(m - n) for m >= n (the
    binomial thinning of the incoming photon number m).  The family sums to
    the identity exactly on the truncated block, and eta = 1 reduces to the
    projective counter Pi_n = |n><n|.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    m = np.arange(cutoff + 1, dtype=float)
    povm = []
    for n in range(cutoff + 1):
        diag = np.where(m >= n, comb(m, n) * eta**n * (1.0 - eta) ** (m - n), 0.0)
        povm.append(np.diag(diag))
    return povm


# ---------------------------------------------------------------------------
# Number-state wavefunctions and Wigner functions


def number_wigner(n: int, x, p):
    """Wigner function of |n>: ((-1)^n / 2 pi) L_n(x^2 + p^2) exp(-(x^2+p^2)/2).

    Equals (-1)^n / 2 pi at the origin since L_n(0) = 1, hence negative there
    for every odd n.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    s = x * x + p * p
    out = (-1.0) ** n / (2.0 * np.pi) * eval_laguerre(n, s) * np.exp(-0.5 * s)
    return out if out.ndim else float(out)


def wavefunction_table(n_max: int, x) -> np.ndarray:
    """psi_n(x) for n = 0..n_max, shape (n_max + 1, len(x)).

    Uses the stable ladder recurrence
    psi_{n+1} = (x psi_n - sqrt(n) psi_{n-1}) / sqrt(n+1)
    seeded by the ground state psi_0(x) = (2 pi)^{-1/4} exp(-x^2 / 4).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros((n_max + 1, x.size))
    out[0] = (2.0 * np.pi) ** -0.25 * np.exp(-0.25 * x * x)
    if n_max >= 1:
        out[1] = x * out[0]
    for n in range(1, n_max):
        out[n + 1] = (x * out[n] - np.sqrt(n) * out[n - 1]) / np.sqrt(n + 1.0)
    return out


def wavefunction(n: int, x):
    """Position-representation wavefunction psi_n(x) of the number state |n>."""
    if n < 0:
        raise ValueError("n must be >= 0")
    table = wavefunction_table(n, x)
    out = table[n]
    return out if np.ndim(x) else float(out[0])


def x_quadrature_density(state: FockPure | FockDensity, x) -> np.ndarray:
    """Probability density of an x-quadrature measurement of a single-mode state."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if isinstance(state, FockPure):
        if state.n_modes != 1:
            raise ValueError("expected a single-mode state")
        table = wavefunction_table(state.cutoff, x)
        amp = table.T @ state.amplitudes
        return np.abs(amp) ** 2
    if state.n_modes != 1:
        raise ValueError("expected a single-mode state")
    table = wavefunction_table(state.cutoff, x)
    return np.einsum("nx,nm,mx->x", table, state.matrix, table).real


# ---------------------------------------------------------------------------
# Multi-mode plumbing


def to_density(state: FockPure | FockDensity) -> FockDensity:
    if isinstance(state, FockDensity):
        return state
    vec = state.amplitudes.reshape(-1)
    return FockDensity(np.outer(vec, vec.conj()), state.cutoff, state.n_modes, state.deficit)


def tensor(*states: FockPure | FockDensity) -> FockPure | FockDensity:
    """Tensor product; mixes of pure and mixed inputs are promoted to densities."""
    if not states:
        raise ValueError("need at least one state")
    cutoff = states[0].cutoff
    if any(s.cutoff != cutoff for s in states):
        raise ValueError("all factors must share one cutoff")
    if all(isinstance(s, FockPure) for s in states):
        amp = states[0].amplitudes
        for s in states[1:]:
            amp = np.tensordot(amp, s.amplitudes, axes=0)
        deficit = 1.0 - float(np.prod([1.0 - s.deficit for s in states]))
        return FockPure(amp, cutoff, deficit)
    mats = [to_density(s) for s in states]
    out = mats[0].matrix
    for m in mats[1:]:
        out = np.kron(out, m.matrix)
    n_modes = sum(m.n_modes for m in mats)
    deficit = 1.0 - float(np.prod([1.0 - m.deficit for m in mats]))
    return FockDensity(out, cutoff, n_modes, deficit)


def _moveaxes_back(tensor_out: np.ndarray, modes: Sequence[int], n_axes: int) -> np.ndarray:
    rest = [m for m in range(n_axes) if m not in modes]
    return tensor_out.transpose(np.argsort(list(modes) + rest))


def apply_unitary(state: FockPure | FockDensity, U: np.ndarray, modes: Sequence[int]) -> FockPure | FockDensity:
    """Apply a unitary built at the same cutoff on ``len(modes)`` modes."""
    modes = [int(m) for m in modes]
    k = len(modes)
    dim = state.cutoff + 1
    if U.shape != (dim**k, dim**k):
        raise ValueError(f"unitary shape {U.shape} does not match {k} modes at cutoff {state.cutoff}")
    if len(set(modes)) != k or (modes and (min(modes) < 0 or max(modes) >= state.n_modes)):
        raise ValueError(f"bad target modes {modes}")
    ut = U.reshape((dim,) * (2 * k))
    if isinstance(state, FockPure):
        out = np.tensordot(ut, state.amplitudes, axes=(range(k, 2 * k), modes))
        return FockPure(_moveaxes_back(out, modes, state.n_modes), state.cutoff, state.deficit)
    n = state.n_modes
    rho = state.matrix.reshape((dim,) * (2 * n))
    out = np.tensordot(ut, rho, axes=(range(k, 2 * k), modes))
    out = _moveaxes_back(out, modes, 2 * n)
    bra_modes = [n + m for m in modes]
    out = np.tensordot(ut.conj(), out, axes=(range(k, 2 * k), bra_modes))
    out = _moveaxes_back(out, bra_modes, 2 * n)
    return FockDensity(out.reshape(dim**n, dim**n), state.cutoff, n, state.deficit)


def partial_trace_fock(state: FockPure | FockDensity, keep: Iterable[int]) -> FockDensity:
    """Reduced density matrix on the kept modes (ascending order)."""
    keep = sorted(set(int(m) for m in keep))
    n = state.n_modes
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"bad mode subset {keep} for {n} modes")
    dim = state.cutoff + 1
    traced = [m for m in range(n) if m not in keep]
    if isinstance(state, FockPure):
        amp = np.moveaxis(state.amplitudes, keep, range(len(keep)))
        amp = amp.reshape(dim ** len(keep), dim ** len(traced))
        rho = amp @ amp.conj().T
        return FockDensity(rho, state.cutoff, len(keep), state.deficit)
    rho = state.matrix.reshape((dim,) * (2 * n))
    for m in sorted(traced, reverse=True):
        rho = np.trace(rho, axis1=m, axis2=rho.ndim // 2 + m)
    k = len(keep)
    return FockDensity(rho.reshape(dim**k, dim**k), state.cutoff, k, state.deficit)


def partial_transpose_fock(state: FockPure | FockDensity, transposed: Iterable[int] = (0,)) -> np.ndarray:
    """Matrix of the partial transpose; Hermitian but generally not positive."""
    rho = to_density(state)
    transposed = sorted(set(int(m) for m in transposed))
    n = rho.n_modes
    if transposed and (transposed[0] < 0 or transposed[-1] >= n):
        raise ValueError(f"bad mode subset {transposed}")
    dim = rho.cutoff + 1
    t = rho.matrix.reshape((dim,) * (2 * n))
    for m in transposed:
        t = np.swapaxes(t, m, n + m)
    return t.reshape(dim**n, dim**n)


def expect(state: FockPure | FockDensity, op: np.ndarray) -> complex:
    if isinstance(state, FockPure):
        vec = state.amplitudes.reshape(-1)
        return complex(np.vdot(vec, op @ vec))
    return complex(np.trace(state.matrix @ op))


def vn_entropy(rho: FockDensity, base: float = 2.0, neg_tol: float = 1e-8) -> float:
    """Von Neumann entropy from the eigenvalues, with the 0 log 0 = 0 convention."""
    evals = np.linalg.eigvalsh(rho.matrix)
    if evals.min() < -neg_tol:
        raise ValueError(f"density matrix has eigenvalue {evals.min():.3e} < -{neg_tol:.1e}")
    evals = np.clip(evals, 0.0, None)
    return float(-xlogx(evals, base).sum())


def trace_norm(M: np.ndarray) -> float:
    """Sum of singular values; Hermitian inputs use the eigenvalue route."""
    M = np.asarray(M)
    if np.abs(M - M.T.conj()).max() <= 1e-12 * max(1.0, np.abs(M).max()):
        return float(np.abs(np.linalg.eigvalsh(M)).sum())
    return float(scipy.linalg.svdvals(M).sum())


def log_negativity_fock(state: FockPure | FockDensity, transposed: Iterable[int] = (0,), base: float = 2.0) -> float:
    """log of the trace norm of the partial transpose, in the configured base."""
    return float(log_in_base(trace_norm(partial_transpose_fock(state, transposed)), base))


@dataclasses.dataclass(frozen=True)
class SchmidtDecomposition:
    """Coefficients (descending, summing to ~1) and the orthonormal local bases."""

    coefficients: np.ndarray
    left: np.ndarray
    right: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.left * np.sqrt(self.coefficients)) @ self.right.T.conj()


def schmidt(state: FockPure) -> SchmidtDecomposition:
    """Schmidt decomposition of a two-mode pure state via the SVD of its amplitude matrix."""
    if state.n_modes != 2:
        raise ValueError("Schmidt decomposition implemented for two-mode pure states")
    u, s, vh = np.linalg.svd(state.amplitudes)
    return SchmidtDecomposition(s**2, u, vh.T.conj())


@dataclasses.dataclass(frozen=True)
class FockOnOff:
    p_off: float
    p_on: float
    off_state: FockDensity
    on_state: FockDensity | None


def on_off_probabilities(state: FockPure | FockDensity, measured: int) -> FockOnOff:
    """On/off detection of one mode: projectors |0><0| and I - |0><0|.

    Conditional states of the remaining modes are returned normalized; an
    impossible branch (probability ~ 0) cannot be conditioned on and raises.
    """
    n = state.n_modes
    if not 0 <= measured < n or n < 2:
        raise ValueError("need >= 2 modes and a valid measured index")
    dim = state.cutoff + 1
    keep = [m for m in range(n) if m != measured]
    if isinstance(state, FockPure):
        amp0 = np.take(state.amplitudes, 0, axis=measured)
        vec = amp0.reshape(-1)
        off_raw = np.outer(vec, vec.conj())
    else:
        rho = state.matrix.reshape((dim,) * (2 * n))
        off_raw = np.take(np.take(rho, 0, axis=n + measured), 0, axis=measured)
        k = len(keep)
        off_raw = off_raw.reshape(dim**k, dim**k)
    reduced = partial_trace_fock(state, keep)
    p_off = float(np.trace(off_raw).real)
    p_on = float(reduced.trace() - p_off)
    if p_off <= 1e-14:
        raise ValueError("p_off ~ 0: cannot condition on the off outcome")
    off_state = FockDensity(off_raw / p_off, state.cutoff, len(keep), state.deficit)
    on_state = None
    if p_on > 1e-14:
        on_state = FockDensity((reduced.matrix - off_raw) / p_on, state.cutoff, len(keep), state.deficit)
    return FockOnOff(p_off, p_on, off_state, on_state)


def homodyne_condition(
    state: FockPure | FockDensity, measured: int, x0: float
) -> tuple[float, FockDensity]:
    """Condition on an ideal x-quadrature outcome ``x0`` of one mode.

    Contracts the measured mode with the position wavefunctions psi_n(x0);
    returns the outcome probability density and the normalized conditional
    state of the remaining modes.
    """
    n = state.n_modes
    if not 0 <= measured < n or n < 2:
        raise ValueError("need >= 2 modes and a valid measured index")
    dim = state.cutoff + 1
    psi = wavefunction_table(state.cutoff, np.array([x0]))[:, 0]
    keep = [m for m in range(n) if m != measured]
    if isinstance(state, FockPure):
        amp = np.tensordot(psi, state.amplitudes, axes=([0], [measured]))
        vec = amp.reshape(-1)
        raw = np.outer(vec, vec.conj())
    else:
        rho = state.matrix.reshape((dim,) * (2 * n))
        raw = np.tensordot(psi, rho, axes=([0], [measured]))
        raw = np.tensordot(psi, raw, axes=([0], [n - 1 + measured]))
        k = len(keep)
        raw = raw.reshape(dim**k, dim**k)
    density = float(np.trace(raw).real)
    if density <= 1e-300:
        raise ValueError("outcome density is numerically zero; cannot condition")
    return density, FockDensity(raw / density, state.cutoff, len(keep), state.deficit)


def homodyne_moments(state: FockPure | FockDensity, alpha_lo: complex) -> tuple[float, float]:
    """Mean and variance of the photocurrent difference in balanced homodyne detection.

    The local oscillator (coherent, amplitude alpha_lo) is handled
    analytically; only signal-mode operator algebra enters:
    <N_D> = |alpha| <X^phi> and <N_D^2> = |alpha|^2 <X^phi 2> + <a+ a> with
    phi = arg(alpha_lo).  Both identities are exact, not merely strong-LO
    asymptotics, and the test suite verifies them against an explicit
    two-mode computation.
    """
    if state.n_modes != 1:
        raise ValueError("expected a single-mode signal state")
    a, ad = ladder_ops(state.cutoff)
    phi = np.angle(alpha_lo)
    mag = abs(alpha_lo)
    xphi = np.exp(-1j * phi) * a + np.exp(1j * phi) * ad
    mean = mag * expect(state, xphi).real
    second = mag**2 * expect(state, xphi @ xphi).real + expect(state, ad @ a).real
    return float(mean), float(second - mean**2)
