"""Shared fixtures and independent oracle helpers for the test suite."""

from __future__ import annotations

import sys

import numpy as np
import pytest

from cvtk import fock
from cvtk.phase_space import GaussianState
from cvtk.unitaries import SymplecticOp, apply, compose, direct_sum, random_symplectic, squeezer


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


def random_physical_state(
    rng: np.random.Generator,
    n_modes: int,
    max_squeeze: float = 1.0,
    max_nbar: float = 2.0,
    displace_scale: float = 1.0,
) -> GaussianState:
    """Random physical Gaussian state with a known-thermal core: V = S D S^T."""
    op = random_symplectic(n_modes, rng, max_squeeze)
    nbars = rng.uniform(0.0, max_nbar, size=n_modes)
    core = np.diag(np.repeat(2.0 * nbars + 1.0, 2))
    mean = rng.normal(scale=displace_scale, size=2 * n_modes)
    return GaussianState(mean, op.S @ core @ op.S.T)


def random_column_stochastic(rng: np.random.Generator, dim: int, n_perms: int = 6) -> np.ndarray:
    """Random doubly stochastic matrix as a convex mixture of permutations."""
    weights = rng.dirichlet(np.ones(n_perms))
    out = np.zeros((dim, dim))
    for w in weights:
        perm = rng.permutation(dim)
        out[perm, np.arange(dim)] += w
    return out


def random_prob_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    return rng.dirichlet(np.ones(dim))


def quadrature_ops(cutoff: int, n_modes: int) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Embedded X_m and P_m operators for an n-mode truncated Fock space."""
    a, ad = fock.ladder_ops(cutoff)
    x1, p1 = a + ad, 1j * (ad - a)
    eye = np.eye(cutoff + 1)
    xs, ps = [], []
    for m in range(n_modes):
        ops_x = [eye] * n_modes
        ops_p = [eye] * n_modes
        ops_x[m] = x1
        ops_p[m] = p1
        acc_x, acc_p = ops_x[0], ops_p[0]
        for f_x, f_p in zip(ops_x[1:], ops_p[1:]):
            acc_x = np.kron(acc_x, f_x)
            acc_p = np.kron(acc_p, f_p)
        xs.append(acc_x)
        ps.append(acc_p)
    return xs, ps


def fock_moments(state) -> tuple[np.ndarray, np.ndarray]:
    """Mean vector and covariance matrix of a Fock-space state, by operator averages.

    Uses Re<A B> = <{A, B}>/2 for Hermitian A, B, so only matrix-vector
    products (pure states) or one matrix product per quadrature (densities)
    are needed.
    """
    xs, ps = quadrature_ops(state.cutoff, state.n_modes)
    quads = []
    for x_op, p_op in zip(xs, ps):
        quads += [x_op, p_op]
    dim = 2 * state.n_modes
    cov = np.zeros((dim, dim))
    if isinstance(state, fock.FockPure):
        vec = state.amplitudes.reshape(-1)
        applied = [q @ vec for q in quads]
        mean = np.array([np.vdot(vec, w).real for w in applied])
        for i in range(dim):
            for j in range(i, dim):
                cov[i, j] = cov[j, i] = np.vdot(applied[i], applied[j]).real - mean[i] * mean[j]
        return mean, cov
    rho_q = [state.matrix @ q for q in quads]
    mean = np.array([np.trace(m).real for m in rho_q])
    for i in range(dim):
        for j in range(i, dim):
            # tr(rho q_i q_j) = sum over elements of (rho q_i) * q_j^T.
            cov[i, j] = cov[j, i] = (rho_q[i] * quads[j].T).sum().real - mean[i] * mean[j]
    return mean, cov


def planted_symplectic(rng: np.random.Generator, n_modes: int, max_squeeze: float = 1.2):
    """Random symplectic with known Euler factors (K, rs, L); rs sorted descending."""
    from cvtk.unitaries import orthogonal_symplectic_from_unitary

    def haar(n):
        z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        q, r = np.linalg.qr(z)
        return q * (np.diagonal(r) / np.abs(np.diagonal(r)))

    k = orthogonal_symplectic_from_unitary(haar(n_modes))
    l = orthogonal_symplectic_from_unitary(haar(n_modes))
    rs = np.sort(rng.uniform(0.05, max_squeeze, size=n_modes))[::-1]
    mid = direct_sum(*[squeezer(r) for r in rs])
    return compose(k, compose(mid, l)), k, rs, l


def pytest_runtest_logreport(report):
    """Print one visible PASS/FAIL line per acceptance criterion."""
    name = report.nodeid.split("::")[-1]
    if report.when == "call" and name.startswith("test_criterion_"):
        num = name.split("_")[2]
        status = "PASS" if report.passed else "FAIL"
        sys.stdout.write(f"\n[acceptance criterion {num}] {status} {name}\n")
        sys.stdout.flush()
