"""Partial measurements on Gaussian states.

Measuring one mode of an (N+1)-mode Gaussian state and discarding it leaves
the remaining modes in a conditional state.  Vacuum projection (the "off"
event of an on/off detector) and homodyne detection keep the conditional
state Gaussian; the complementary "on" event produces a two-term signed
mixture of Gaussians whose Wigner function has a negative central region.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .conventions import NumericalError
from .phase_space import GaussianState, partial_trace
from .unitaries import apply, embed, rotation

__all__ = [
    "SignedGaussianMixture",
    "MeasurementOutcome",
    "OnOffResult",
    "condition_on_gaussian_povm",
    "on_off_detect",
    "negative_region_radius",
    "homodyne_x",
    "homodyne_quadrature",
]


@dataclasses.dataclass(frozen=True)
class SignedGaussianMixture:
    """Normalized combination sum_i w_i G_i; weights may be negative but sum to 1."""

    terms: tuple[tuple[float, GaussianState], ...]

    def __post_init__(self):
        terms = tuple((float(w), s) for w, s in self.terms)
        total = sum(w for w, _ in terms)
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"mixture weights sum to {total}, expected 1")
        object.__setattr__(self, "terms", terms)

    @property
    def n_modes(self) -> int:
        return self.terms[0][1].n_modes

    def wigner(self, r):
        """Mixture Wigner function: sum of weighted Gaussian Wigner densities."""
        from .phase_space import wigner_fn

        return sum(w * np.asarray(wigner_fn(s, r)) for w, s in self.terms)


@dataclasses.dataclass(frozen=True)
class MeasurementOutcome:
    """Outcome probability (or density, for continuous outcomes) and conditional state."""

    probability: float
    conditional: GaussianState | SignedGaussianMixture | None


@dataclasses.dataclass(frozen=True)
class OnOffResult:
    off: MeasurementOutcome
    on: MeasurementOutcome


def _split_measured(state: GaussianState, measured: int):
    n = state.n_modes
    if not 0 <= measured < n:
        raise ValueError(f"measured mode {measured} out of range for {n} modes")
    if n < 2:
        raise ValueError("need at least one unmeasured mode")
    keep = [m for m in range(n) if m != measured]
    ki = np.concatenate([[2 * m, 2 * m + 1] for m in keep])
    mi = np.array([2 * measured, 2 * measured + 1])
    v_keep = state.cov[np.ix_(ki, ki)]
    v_meas = state.cov[np.ix_(mi, mi)]
    cross = state.cov[np.ix_(ki, mi)]
    return state.mean[ki], state.mean[mi], v_keep, v_meas, cross


def condition_on_gaussian_povm(state: GaussianState, measured: int) -> tuple[float, GaussianState]:
    """Vacuum projection ("off" event) on one mode: probability and conditional state.

    p_off = 2 / sqrt(det(V_m + I)) * exp(-rbar_m^T (V_m + I)^{-1} rbar_m / 2),
    and the kept modes collapse to mean rbar_k - C (V_m + I)^{-1} rbar_m and
    covariance V_k - C (V_m + I)^{-1} C^T.  The exponent's 1/2 coefficient
    and the covariance-update minus sign are both pinned by the coherent-state
    check p_off = exp(-|alpha|^2) and by the Fock-space oracle.
    """
    r_keep, r_meas, v_keep, v_meas, cross = _split_measured(state, measured)
    vi = v_meas + np.eye(2)
    det = float(np.linalg.det(vi))
    if det <= 0.0:
        raise NumericalError("V_measured + I is not positive definite")
    sol_mean = np.linalg.solve(vi, r_meas)
    p_off = float(2.0 / np.sqrt(det) * np.exp(-0.5 * r_meas @ sol_mean))
    cond = GaussianState(
        r_keep - cross @ sol_mean,
        v_keep - cross @ np.linalg.solve(vi, cross.T),
    )
    return p_off, cond


def on_off_detect(state: GaussianState, measured: int) -> OnOffResult:
    """Binary on/off detection of one mode.

    The off outcome is Gaussian; the on outcome is the normalized signed
    mixture (1-p_off)^{-1} [ W_reduced - p_off W_off ], which is flagged empty
    when p_off = 1 (measured mode in vacuum).
    """
    p_off, off_state = condition_on_gaussian_povm(state, measured)
    p_on = 1.0 - p_off
    keep = [m for m in range(state.n_modes) if m != measured]
    reduced = partial_trace(state, keep)
    if p_on <= 1e-14:
        on_outcome = MeasurementOutcome(0.0, None)
    else:
        mixture = SignedGaussianMixture(((1.0 / p_on, reduced), (-p_off / p_on, off_state)))
        on_outcome = MeasurementOutcome(p_on, mixture)
    return OnOffResult(off=MeasurementOutcome(p_off, off_state), on=on_outcome)


def negative_region_radius(r: float) -> float:
    """Radius of the central negative region of the on-conditioned two-mode-squeezed state.

    The on-event Wigner function of a two-mode squeezed vacuum is a signed
    mixture of a thermal and a vacuum Gaussian; its radial profile crosses
    zero at R = sqrt((1 + u) ln(1 + u) / u) with u = tanh^2(r).  The radius
    increases monotonically from 1 (r -> 0) to sqrt(ln 4) ~ 1.1774 (r -> oo).
    """
    if r <= 0.0:
        raise ValueError("squeezing parameter must be positive")
    u = np.tanh(r) ** 2
    return float(np.sqrt((1.0 + u) * np.log1p(u) / u))


def homodyne_x(state: GaussianState, measured: int, x0: float) -> tuple[float, GaussianState]:
    """Ideal x-quadrature homodyne detection of one mode with recorded outcome ``x0``.

    Returns the outcome probability density (the Gaussian x-marginal of the
    measured mode evaluated at x0) and the conditional Gaussian state of the
    kept modes, obtained by conditioning on the single coordinate x_measured
    (rank-1 block, handled by its pseudo-inverse): the conditional covariance
    V_k - c_x c_x^T / V_xx does not depend on x0, while the conditional mean
    is affine in x0.
    """
    r_keep, r_meas, v_keep, v_meas, cross = _split_measured(state, measured)
    v_xx = float(v_meas[0, 0])
    if v_xx <= 0.0:
        raise NumericalError(f"measured x-variance must be positive, got {v_xx:.3e}")
    c_x = cross[:, 0]
    density = float(np.exp(-0.5 * (x0 - r_meas[0]) ** 2 / v_xx) / np.sqrt(2.0 * np.pi * v_xx))
    cond = GaussianState(
        r_keep + c_x * (x0 - r_meas[0]) / v_xx,
        v_keep - np.outer(c_x, c_x) / v_xx,
    )
    return density, cond


def homodyne_quadrature(
    state: GaussianState, measured: int, phi: float, x0: float
) -> tuple[float, GaussianState]:
    """Homodyne detection of the rotated quadrature X cos(phi) + P sin(phi).

    Implemented by rotating the measured mode by phi and conditioning on x:
    measuring X after the rotation R(phi) is statistically identical to
    measuring the rotated quadrature on the original state.
    """
    rotated = apply(embed(rotation(phi), state.n_modes, [measured]), state)
    return homodyne_x(rotated, measured, x0)
