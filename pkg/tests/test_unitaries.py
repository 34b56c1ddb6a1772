"""Symplectic generators, composition, Williamson and Euler decompositions."""

from __future__ import annotations

import numpy as np
import pytest

from conftest import planted_symplectic, random_physical_state
from cvtk.phase_space import GaussianState, coherent, is_physical, omega, squeezed, thermal, tmsv, vacuum, product
from cvtk.unitaries import (
    SymplecticOp,
    apply,
    beam_splitter,
    compose,
    direct_sum,
    displacement,
    embed,
    euler_decompose,
    identity_op,
    inverse,
    is_passive,
    orthogonal_symplectic_from_unitary,
    random_symplectic,
    rotation,
    squeezer,
    standard_form_williamson,
    symplectic_defect,
    two_mode_squeezer,
    williamson,
)

GENERATORS = [
    lambda v: displacement(v, -v / 2),
    squeezer,
    rotation,
    beam_splitter,
    two_mode_squeezer,
]


@pytest.mark.parametrize("make", GENERATORS)
def test_generators_are_symplectic(make, rng):
    for _ in range(20):
        op = make(rng.uniform(-2.0, 2.0))
        assert symplectic_defect(op.S) < 1e-10
        assert np.linalg.det(op.S) == pytest.approx(1.0, abs=1e-12)


def test_symplectic_op_rejects_non_symplectic():
    with pytest.raises(ValueError, match="not symplectic"):
        SymplecticOp(np.zeros(2), np.diag([2.0, 1.0]))


def test_displacement_zero_is_identity():
    op = displacement(0.0, 0.0)
    assert np.array_equal(op.S, np.eye(2))
    assert np.array_equal(op.d, np.zeros(2))


def test_displacement_makes_coherent_state():
    st = apply(displacement(1.2, -0.7), vacuum())
    assert np.array_equal(st.mean, [1.2, -0.7])
    assert np.array_equal(st.cov, np.eye(2))


def test_displacement_composition_adds():
    total = compose(displacement(0.3, 0.4), displacement(-1.0, 2.0))
    assert np.allclose(total.d, [-0.7, 2.4])
    assert np.array_equal(total.S, np.eye(2))


def test_squeezer_on_vacuum():
    r = 0.9
    st = apply(squeezer(r), vacuum())
    assert np.allclose(st.cov, np.diag([np.exp(-2 * r), np.exp(2 * r)]), rtol=1e-15)


def test_two_mode_squeezer_on_vacuum_matches_tmsv_cov():
    r = 0.75
    st = apply(two_mode_squeezer(r), vacuum(2))
    assert np.allclose(st.cov, tmsv(r).cov, atol=1e-14)


def test_beam_splitter_splits_coherent_state():
    alpha = 0.8 + 0.5j
    beta = 0.6
    joint = product(coherent(2 * alpha.real, 2 * alpha.imag), vacuum())
    out = apply(beam_splitter(beta), joint)
    a1 = alpha * np.cos(beta)
    a2 = alpha * np.sin(beta)
    assert np.allclose(out.mean, [2 * a1.real, 2 * a1.imag, 2 * a2.real, 2 * a2.imag], atol=1e-14)
    assert np.allclose(out.cov, np.eye(4), atol=1e-14)


def test_apply_identity_is_noop(rng):
    st = random_physical_state(rng, 2)
    out = apply(identity_op(2), st)
    assert np.array_equal(out.mean, st.mean)
    assert np.array_equal(out.cov, st.cov)


def test_mixing_opposite_squeezers_gives_tmsv():
    r = 0.65
    joint = product(squeezed(-r), squeezed(r))
    out = apply(beam_splitter(-np.pi / 4), joint)
    assert np.abs(out.cov - tmsv(r).cov).max() < 1e-12


def test_rotation_leaves_thermal_invariant():
    st = thermal(2.3)
    out = apply(rotation(0.77), st)
    assert np.abs(out.cov - st.cov).max() < 1e-14


@pytest.mark.parametrize("make", GENERATORS)
def test_apply_preserves_physicality(make, rng):
    n_modes = make(0.1).n_modes
    for _ in range(100):
        st = random_physical_state(rng, n_modes)
        out = apply(make(rng.uniform(-1.5, 1.5)), st)
        assert is_physical(out, tol=1e-8)


def test_apply_dimension_mismatch(rng):
    with pytest.raises(ValueError):
        apply(squeezer(0.3), random_physical_state(rng, 2))


def test_compose_with_inverse_is_identity(rng):
    op = random_symplectic(2, rng)
    comp = compose(inverse(op), op)
    assert np.abs(comp.S - np.eye(4)).max() < 1e-12
    assert np.abs(comp.d).max() < 1e-12


def test_rotations_compose_additively():
    a, b = 0.5, 1.1
    comp = compose(rotation(a), rotation(b))
    assert np.abs(comp.S - rotation(a + b).S).max() < 1e-14


def test_compose_matches_sequential_apply(rng):
    for _ in range(50):
        op1 = random_symplectic(2, rng)
        op2 = random_symplectic(2, rng)
        st = random_physical_state(rng, 2)
        via_compose = apply(compose(op2, op1), st)
        sequential = apply(op2, apply(op1, st))
        assert np.abs(via_compose.mean - sequential.mean).max() < 1e-12
        assert np.abs(via_compose.cov - sequential.cov).max() < 1e-11


def test_is_passive():
    assert is_passive(beam_splitter(0.4))
    assert is_passive(rotation(1.0))
    assert not is_passive(squeezer(0.2))
    assert not is_passive(displacement(1.0, 0.0))
    assert not is_passive(two_mode_squeezer(0.3))


def test_embed_acts_on_chosen_modes(rng):
    st = random_physical_state(rng, 3)
    op = embed(squeezer(0.4), 3, [1])
    out = apply(op, st)
    untouched = [0, 1, 4, 5]
    assert np.allclose(out.cov[np.ix_(untouched, untouched)], st.cov[np.ix_(untouched, untouched)])


def test_embed_reversed_modes_swaps_roles():
    direct = embed(two_mode_squeezer(0.5), 2, [0, 1])
    flipped = embed(two_mode_squeezer(0.5), 2, [1, 0])
    # The two-mode squeezer is symmetric under mode exchange.
    assert np.abs(direct.S - flipped.S).max() < 1e-15
    bs_direct = embed(beam_splitter(0.3), 2, [0, 1])
    bs_flipped = embed(beam_splitter(0.3), 2, [1, 0])
    assert np.abs(bs_direct.S - bs_flipped.S).max() > 0.1


def test_orthogonal_symplectic_from_unitary(rng):
    z = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    q, _ = np.linalg.qr(z)
    op = orthogonal_symplectic_from_unitary(q)
    assert is_passive(op, tol=1e-12)
    assert symplectic_defect(op.S) < 1e-12


# ---------------------------------------------------------------------------
# Williamson


def test_williamson_thermal_convention():
    wd = williamson(3.0 * np.eye(2))
    assert wd.spectrum == pytest.approx([3.0])
    assert np.array_equal(wd.W, np.eye(2))


def test_williamson_tmsv_is_pure():
    wd = williamson(tmsv(0.9).cov)
    assert wd.spectrum == pytest.approx([1.0, 1.0], abs=1e-12)
    assert np.abs(wd.reconstruct() - tmsv(0.9).cov).max() < 1e-10


def test_williamson_random_planted_spectra(rng):
    for n in (1, 2, 3):
        for _ in range(20):
            op = random_symplectic(n, rng)
            nus = np.sort(rng.uniform(1.0, 6.0, size=n))[::-1]
            v = op.S @ np.diag(np.repeat(nus, 2)) @ op.S.T
            wd = williamson(v)
            assert np.abs(wd.reconstruct() - v).max() < 1e-10
            assert np.abs(wd.spectrum - nus).max() < 1e-8 * nus.max()
            assert symplectic_defect(wd.W) < 1e-9


def test_williamson_rejects_indefinite():
    with pytest.raises(ValueError, match="positive definite"):
        williamson(np.diag([1.0, -1.0]))


def test_standard_form_williamson_tmsv():
    r = 0.8
    ch, sh = np.cosh(2 * r), np.sinh(2 * r)
    W, nu_plus, nu_minus = standard_form_williamson(ch, ch, sh)
    assert nu_plus == pytest.approx(1.0, abs=1e-12)
    assert nu_minus == pytest.approx(1.0, abs=1e-12)
    # omega_+ = cosh r, omega_- = sinh r blocks.
    assert W[0, 0] == pytest.approx(np.cosh(r), abs=1e-12)
    assert W[0, 2] == pytest.approx(np.sinh(r), abs=1e-12)
    v = W @ np.diag([nu_plus, nu_plus, nu_minus, nu_minus]) @ W.T
    expected = np.array(
        [[ch, 0, sh, 0], [0, ch, 0, -sh], [sh, 0, ch, 0], [0, -sh, 0, ch]]
    )
    assert np.abs(v - expected).max() < 1e-10
    assert symplectic_defect(W) < 1e-12


def test_standard_form_williamson_asymmetric():
    a, b, c = 2.0, 3.0, 1.1
    W, nu_plus, nu_minus = standard_form_williamson(a, b, c)
    v = np.array([[a, 0, c, 0], [0, a, 0, -c], [c, 0, b, 0], [0, -c, 0, b]])
    recon = W @ np.diag([nu_minus, nu_minus, nu_plus, nu_plus]) @ W.T
    assert np.abs(recon - v).max() < 1e-10
    # The closed-form eigenvalues agree with the eigenvalue route.
    from cvtk.phase_space import symplectic_spectrum

    assert np.sort([nu_plus, nu_minus])[::-1] == pytest.approx(symplectic_spectrum(v), abs=1e-10)


# ---------------------------------------------------------------------------
# Euler / Bloch-Messiah


def test_euler_passive_input_has_zero_squeezing(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, _ = np.linalg.qr(z)
    s = orthogonal_symplectic_from_unitary(q).S
    ed = euler_decompose(s)
    assert np.abs(ed.squeeze_params).max() < 1e-10
    assert np.abs(ed.K @ ed.L - s).max() < 1e-10


def test_euler_single_squeezer_is_fixed_point():
    ed = euler_decompose(squeezer(0.7).S)
    assert np.array_equal(ed.K, np.eye(2))
    assert ed.squeeze_params == pytest.approx([0.7], abs=1e-12)
    assert np.abs(ed.L - np.eye(2)).max() < 1e-12


def test_euler_two_mode_squeezer_factorization():
    r = 0.83
    lhs = two_mode_squeezer(r).S
    middle = direct_sum(squeezer(-r), squeezer(r)).S
    rhs = beam_splitter(-np.pi / 4).S @ middle @ beam_splitter(np.pi / 4).S
    assert np.abs(lhs - rhs).max() < 1e-12
    ed = euler_decompose(lhs)
    assert np.sort(ed.squeeze_params) == pytest.approx([r, r], abs=1e-10)
    assert np.abs(ed.reconstruct() - lhs).max() < 1e-10


def test_euler_random_planted(rng):
    for n in (1, 2, 3):
        for _ in range(15):
            op, _, rs, _ = planted_symplectic(rng, n)
            ed = euler_decompose(op.S)
            assert np.abs(ed.reconstruct() - op.S).max() < 1e-9
            assert np.abs(np.sort(ed.squeeze_params) - np.sort(rs)).max() < 1e-8
            for factor in (ed.K, ed.L):
                assert symplectic_defect(factor) < 1e-9
                assert np.abs(factor.T @ factor - np.eye(2 * n)).max() < 1e-9


def test_euler_rejects_non_symplectic():
    with pytest.raises(ValueError, match="not symplectic"):
        euler_decompose(np.diag([2.0, 1.0]))


def test_generated_symplectics_have_unit_determinant(rng):
    for n in (1, 2, 3):
        op = random_symplectic(n, rng)
        assert np.linalg.det(op.S) == pytest.approx(1.0, rel=1e-10)
