"""Phase-space core: symplectic form, physicality, Wigner/characteristic functions."""

from __future__ import annotations

import numpy as np
import pytest
from scipy.linalg import expm

from conftest import fock_moments, random_physical_state
from cvtk import fock
from cvtk.conventions import NumericalError
from cvtk.phase_space import (
    GaussianState,
    characteristic_fn,
    coherent,
    is_physical,
    mean_photon_number,
    omega,
    partial_trace,
    product,
    squeezed,
    symplectic_spectrum,
    thermal,
    tmsv,
    vacuum,
    wigner_fn,
)


def test_omega_single_mode():
    assert omega(1).tolist() == [[0.0, 1.0], [-1.0, 0.0]]


def test_omega_block_diagonal():
    om = omega(2)
    expected = np.zeros((4, 4))
    expected[0, 1] = expected[2, 3] = 1.0
    expected[1, 0] = expected[3, 2] = -1.0
    assert np.array_equal(om, expected)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_omega_identities(n):
    om = omega(n)
    assert np.array_equal(om @ om.T, np.eye(2 * n))
    assert np.array_equal(om @ om, -np.eye(2 * n))
    assert np.array_equal(om.T, -om)


def test_omega_rejects_zero_modes():
    with pytest.raises(ValueError):
        omega(0)


def test_state_symmetrizes_small_asymmetry():
    cov = np.eye(2)
    cov[0, 1] = 1e-12
    st = GaussianState([0, 0], cov)
    assert st.cov[0, 1] == st.cov[1, 0]


def test_state_rejects_large_asymmetry():
    cov = np.eye(2)
    cov[0, 1] = 1e-3
    with pytest.raises(ValueError, match="asymmetry"):
        GaussianState([0, 0], cov)


def test_state_rejects_shape_mismatch():
    with pytest.raises(ValueError):
        GaussianState([0, 0, 0], np.eye(2))


def test_vacuum_is_physical():
    report = is_physical(vacuum())
    assert report
    assert report.min_eigenvalue >= -1e-12
    assert report.symplectic_spectrum == pytest.approx([1.0])


def test_half_vacuum_variance_unphysical():
    # det V = 0.25 violates the single-mode bound det V >= 1.
    report = is_physical(GaussianState([0, 0], 0.5 * np.eye(2)))
    assert not report
    assert report.min_eigenvalue < -0.4


@pytest.mark.parametrize("r", [0.1, 0.5, 2.0, 5.0])
def test_squeezed_state_physical_for_all_r(r):
    assert is_physical(squeezed(r))
    assert is_physical(squeezed(-r))


def test_random_states_have_spectrum_above_one(rng):
    for n in (1, 2, 3):
        for _ in range(30):
            st = random_physical_state(rng, n)
            assert symplectic_spectrum(st.cov).min() >= 1.0 - 1e-9


def test_mean_photon_number_examples():
    assert mean_photon_number(vacuum()) == pytest.approx(0.0, abs=1e-15)
    assert mean_photon_number(thermal(1.7)) == pytest.approx(1.7, rel=1e-14)
    r = 0.9
    assert mean_photon_number(squeezed(r)) == pytest.approx(np.sinh(r) ** 2, rel=1e-13)
    x, p = 1.2, -0.4
    assert mean_photon_number(coherent(x, p)) == pytest.approx((x * x + p * p) / 4.0, rel=1e-13)


def test_characteristic_at_zero_is_one(rng):
    for n in (1, 2):
        st = random_physical_state(rng, n)
        assert characteristic_fn(st, np.zeros(2 * n)) == pytest.approx(1.0)


def test_characteristic_vacuum_value():
    assert characteristic_fn(vacuum(), [2.0, 0.0]) == pytest.approx(np.exp(-0.5))


def test_characteristic_thermal_is_real_positive():
    val = characteristic_fn(thermal(0.8), [0.7, -1.1])
    assert abs(val.imag) < 1e-15
    assert 0 < val.real <= 1


def test_characteristic_bounded_by_one(rng):
    st = random_physical_state(rng, 2)
    for _ in range(50):
        s = rng.normal(scale=2.0, size=4)
        assert abs(characteristic_fn(st, s)) <= 1.0 + 1e-12


def _fock_characteristic(state_fock: fock.FockPure, s: np.ndarray) -> complex:
    """Independent oracle: chi(s) = tr(D(s) rho) with D(s) = expm(i R^T Omega s / 2)."""
    a, ad = fock.ladder_ops(state_fock.cutoff)
    x_op, p_op = a + ad, 1j * (ad - a)
    om_s = omega(1) @ s
    d_op = expm(0.5j * (x_op * om_s[0] + p_op * om_s[1]))
    vec = state_fock.amplitudes
    return complex(np.vdot(vec, d_op @ vec))


@pytest.mark.parametrize("s", [[1.3, -0.8], [0.4, 0.9], [-2.0, 0.3]])
def test_characteristic_matches_fock_for_coherent(s):
    # Pins the linear-term coefficient i/2 against tr(D(s) rho).
    alpha = 0.7 + 0.4j
    gaussian = coherent(2 * alpha.real, 2 * alpha.imag)
    oracle = _fock_characteristic(fock.coherent(alpha, 60), np.asarray(s, dtype=float))
    assert characteristic_fn(gaussian, s) == pytest.approx(oracle, abs=1e-10)


def test_characteristic_matches_fock_for_squeezed():
    r = 0.6
    s = np.array([0.9, 1.4])
    oracle = _fock_characteristic(fock.squeezed_vacuum(r, 60), s)
    assert characteristic_fn(squeezed(r), s) == pytest.approx(oracle, abs=1e-10)


def test_wigner_known_values():
    assert wigner_fn(vacuum(), [0.0, 0.0]) == pytest.approx(1.0 / (2 * np.pi), rel=1e-14)
    nbar = 1.3
    assert wigner_fn(thermal(nbar), [0.0, 0.0]) == pytest.approx(1.0 / (2 * np.pi * (2 * nbar + 1)), rel=1e-13)
    st = coherent(1.0, -2.0)
    assert wigner_fn(st, st.mean) == pytest.approx(1.0 / (2 * np.pi), rel=1e-14)


def test_wigner_strictly_positive(rng):
    st = random_physical_state(rng, 1)
    pts = rng.normal(scale=4.0, size=(100, 2))
    assert np.all(wigner_fn(st, pts) > 0.0)


def test_wigner_rejects_singular_covariance():
    st = GaussianState([0, 0], np.diag([0.0, 1.0]))
    with pytest.raises(NumericalError):
        wigner_fn(st, [0.0, 0.0])


@pytest.mark.parametrize("state", [vacuum(), thermal(4.5), squeezed(1.1), coherent(2.0, 1.0)])
def test_wigner_normalization_on_grid(state):
    # Symplectic eigenvalue <= 10 for all of these; quadrature error < 1e-6.
    xs = np.arange(-30.0, 30.0, 0.05)
    grid_x, grid_p = np.meshgrid(xs, xs, indexing="ij")
    pts = np.stack([grid_x, grid_p], axis=-1)
    total = wigner_fn(state, pts).sum() * 0.05 * 0.05
    assert total == pytest.approx(1.0, abs=1e-6)


def test_partial_trace_tmsv_gives_thermal():
    r = 0.8
    reduced = partial_trace(tmsv(r), [0])
    assert np.allclose(reduced.cov, np.cosh(2 * r) * np.eye(2), rtol=1e-15)
    assert np.allclose(reduced.mean, 0.0)


def test_partial_trace_product_untouched(rng):
    a = random_physical_state(rng, 1)
    b = random_physical_state(rng, 1)
    joint = product(a, b)
    back = partial_trace(joint, [0])
    assert np.array_equal(back.cov, a.cov)
    assert np.array_equal(back.mean, a.mean)


def test_partial_trace_index_bookkeeping_against_fock(rng):
    # Three modes, keep the first and third: rows/cols {0, 1, 4, 5}.
    sts = [random_physical_state(rng, 1, max_squeeze=0.4, max_nbar=0.4, displace_scale=0.4) for _ in range(3)]
    joint = product(*sts)
    reduced = partial_trace(joint, [0, 2])
    idx = [0, 1, 4, 5]
    assert np.array_equal(reduced.cov, joint.cov[np.ix_(idx, idx)])

    cutoff = 14
    factors = []
    for st in sts:
        disp = fock.displacement_matrix((st.mean[0] + 1j * st.mean[1]) / 2.0, cutoff)
        base = fock.thermal((symplectic_spectrum(st.cov)[0] - 1.0) / 2.0, cutoff, tail_budget=1e-4)
        factors.append(fock.apply_unitary(base, disp, [0]))
    joint_fock = fock.tensor(*factors)
    reduced_fock = fock.partial_trace_fock(joint_fock, [0, 2])
    mean_f, _ = fock_moments(reduced_fock)
    # Thermal factors are rotation invariant, so means identify the kept modes.
    assert np.allclose(mean_f, reduced.mean, atol=5e-3)


def test_partial_trace_composition(rng):
    st = random_physical_state(rng, 3)
    via_both = partial_trace(partial_trace(st, [0, 2]), [0])
    direct = partial_trace(st, [0])
    assert np.array_equal(via_both.cov, direct.cov)
    assert np.array_equal(via_both.mean, direct.mean)


def test_partial_trace_rejects_bad_modes(rng):
    st = random_physical_state(rng, 2)
    with pytest.raises(ValueError):
        partial_trace(st, [])
    with pytest.raises(ValueError):
        partial_trace(st, [2])


@pytest.mark.parametrize(
    "state_pair",
    [
        ("thermal", 1.5),
        ("squeezed", 0.8),
        ("coherent", (1.4, -0.6)),
    ],
)
def test_wigner_x_marginal_matches_fock_density(state_pair):
    kind, param = state_pair
    cutoff = 72
    if kind == "thermal":
        gaussian = thermal(param)
        fock_state = fock.thermal(param, cutoff)
    elif kind == "squeezed":
        gaussian = squeezed(param)
        fock_state = fock.to_density(fock.squeezed_vacuum(param, cutoff))
    else:
        x, p = param
        gaussian = coherent(x, p)
        fock_state = fock.to_density(fock.coherent((x + 1j * p) / 2.0, cutoff))
    xs = np.arange(-12.0, 12.0, 0.01)
    ps = np.arange(-40.0, 40.0, 0.05)
    grid_x, grid_p = np.meshgrid(xs, ps, indexing="ij")
    marg = wigner_fn(gaussian, np.stack([grid_x, grid_p], axis=-1)).sum(axis=1) * 0.05
    oracle = fock.x_quadrature_density(fock_state, xs)
    assert np.abs(marg - oracle).max() < 1e-6


def test_product_requires_argument():
    with pytest.raises(ValueError):
        product()
