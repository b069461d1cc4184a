import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from varjet.cpath import PolygonalPath, hexagon_path
from varjet.errors import SingularityTooClose, StepUnderflow
from varjet.frwmodel import FrwParams, frw_field, hamiltonian, mu, sol1
from varjet.jetflow import (
    IntegratorConfig,
    JetState,
    PolyVectorField,
    flow_fd_oracle,
    integrate_jet,
    integrate_path,
    ve_rhs,
)
from varjet.symtensor import SymMap

J4 = np.block([[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]])


def random_path(rng, n_seg=3, scale=0.4):
    pts = [0j]
    for _ in range(n_seg):
        pts.append(pts[-1] + scale * complex(rng.normal(), rng.normal()))
    return PolygonalPath(tuple(pts))


def test_linear_field_matches_expm():
    A = np.array([[0.1, 1.0, 0], [-1.0, 0.2, 0.3], [0, 0.5, -0.4]], dtype=complex)
    X = PolyVectorField.linear(A)
    path = PolygonalPath((0, 1 + 0.5j, 0.3 + 1.2j))
    jet = integrate_jet(X, [1.0, 0.0, -1.0], path, 3)
    T = path.end - path.start
    assert np.allclose(jet.blocks[0].entries, scipy.linalg.expm(A * T), atol=1e-11)
    # higher derivatives of a linear flow vanish
    assert np.max(np.abs(jet.blocks[1].entries)) < 1e-12
    assert np.max(np.abs(jet.blocks[2].entries)) < 1e-12


def test_riccati_flow_derivatives_closed_form():
    # x' = x^2: psi = x0/(1 - x0 t), d^j psi/dx0^j = j! t^(j-1) / (1 - x0 t)^(j+1)
    X = PolyVectorField(1, (((1, (2,)),),))
    x0 = 0.3
    t = 0.8 + 0.6j
    jet = integrate_jet(X, [x0], PolygonalPath((0, 0.8, t)), 6)
    assert abs(jet.base[0] - x0 / (1 - x0 * t)) < 1e-12
    for j, Y in enumerate(jet.blocks, 1):
        want = math.factorial(j) * t ** (j - 1) / (1 - x0 * t) ** (j + 1)
        assert abs(Y.entries[0, 0] - want) < 1e-10 * abs(want)


@pytest.mark.parametrize("seed", range(10))
def test_fd_oracle_agrees_on_random_cubic_fields(seed):
    rng = np.random.default_rng(seed)
    n = 2 + seed % 2
    X = PolyVectorField.random(n, 3, rng, scale=0.3)
    ivp = 0.3 * (rng.normal(size=n) + 1j * rng.normal(size=n))
    path = random_path(rng, 2, 0.3)
    jet = integrate_jet(X, ivp, path, 3)
    fd = flow_fd_oracle(X, ivp, path, 3)
    for Y, Z in zip(jet.blocks, fd):
        err = np.max(np.abs(Y.entries - Z.entries)) / max(1.0, np.max(np.abs(Y.entries)))
        assert err < 1e-3


@settings(max_examples=15)
@given(st.integers(0, 10_000), st.integers(1, 3), st.integers(1, 4))
def test_poly_and_block_engines_agree(seed, n, k):
    rng = np.random.default_rng(seed)
    X = PolyVectorField.random(n, 3, rng, scale=0.3)
    ivp = 0.3 * rng.normal(size=n)
    path = random_path(rng, 2, 0.3)
    a = integrate_jet(X, ivp, path, k, engine="poly")
    b = integrate_jet(X, ivp, path, k, engine="blocks")
    assert np.allclose(a.base, b.base, atol=1e-11)
    for Ya, Yb in zip(a.blocks, b.blocks):
        assert np.allclose(Ya.entries, Yb.entries, rtol=1e-8, atol=1e-9)


def test_ve_rhs_order_two_by_hand():
    # dY2 = A1 Y2 + A2 (Y1 . Y1) in one variable
    A = [SymMap(1, 1, 1, np.array([[2.0]])), SymMap(1, 2, 1, np.array([[3.0]]))]
    Y = [SymMap(1, 1, 1, np.array([[5.0]])), SymMap(1, 2, 1, np.array([[7.0]]))]
    d = ve_rhs(A, Y)
    assert d[0].entries[0, 0] == 10
    assert d[1].entries[0, 0] == 2 * 7 + 3 * 25


def test_ve_rhs_shape_checks():
    A = [SymMap(1, 1, 1, np.eye(1))]
    with pytest.raises(ValueError):
        ve_rhs(A, [SymMap(1, 1, 1, np.eye(1)), SymMap(1, 2, 1, np.eye(1))])


def _frw_jet(p=3, k=1, loop=None):
    P = FrwParams(1, mu(p), mu(p))
    sol = sol1(P.L)
    return P, sol, integrate_jet(frw_field(P), sol.ivp, loop or hexagon_path(1), k)


def test_symplectic_first_variational_block():
    P = FrwParams(1, -0.3, -0.7)
    sol = sol1(P.L)
    path = PolygonalPath((0, 1.0 + 0.8j, 2.0 - 0.2j))
    Y1 = integrate_jet(frw_field(P), sol.ivp, path, 1).blocks[0].entries
    assert np.max(np.abs(Y1.T @ J4 @ Y1 - J4)) < 1e-9


def test_energy_conserved_along_loop():
    P, sol, jet = _frw_jet(3, 2)
    E0 = hamiltonian(P, sol.ivp)
    assert abs(E0 - sol.energy) < 1e-12
    assert abs(hamiltonian(P, jet.base) - E0) < 1e-10


def test_flow_approx_identity_jet():
    st_ = JetState.identity(0, [1.0, 2.0], 3)
    assert np.allclose(st_.flow_approx([0.1, -0.2]), [1.1, 1.8])
    back = JetState.from_taylor(0, st_.to_taylor(), 3)
    assert all(np.array_equal(a.entries, b.entries) for a, b in zip(back.blocks, st_.blocks))


def test_flow_approx_matches_perturbed_flow():
    X = PolyVectorField(2, (((1, (0, 1)),), ((-1, (1, 0)), (-0.5, (3, 0)))))
    ivp = np.array([0.4, 0.1])
    path = PolygonalPath((0, 0.7 + 0.2j))
    jet = integrate_jet(X, ivp, path, 4)
    u = np.array([1e-2, -2e-2])
    exact, _ = integrate_path(lambda y, s: s * X(y), ivp + u, path)
    assert np.max(np.abs(jet.flow_approx(u) - exact)) < 1e-9


def test_singularity_clearance_enforced():
    sol = sol1(-1.0)
    path = PolygonalPath((0, 2.0j))
    with pytest.raises(SingularityTooClose):
        integrate_jet(frw_field(FrwParams(1, -1.0, -1.0)), sol.ivp, path, 1, singularities=sol.poles(10))


def test_step_underflow_at_pole():
    # x' = x^2 from x0 = 1 blows up at t = 1
    X = PolyVectorField(1, (((1, (2,)),),))
    with pytest.raises(StepUnderflow):
        integrate_jet(X, [1.0], PolygonalPath((0, 2.0)), 1, cfg=IntegratorConfig(min_step=1e-6))


def test_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(rtol=0)
    with pytest.raises(ValueError):
        integrate_jet(PolyVectorField.linear(np.eye(1)), [1.0], PolygonalPath((0, 1)), 0)


def test_fd_oracle_order_limit():
    with pytest.raises(ValueError):
        flow_fd_oracle(PolyVectorField.linear(np.eye(1)), [1.0], PolygonalPath((0, 1)), 4)


def test_field_evaluation_batched():
    X = PolyVectorField(2, (((2, (1, 1)),), ((1, (0, 0)),)))
    Z = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.allclose(X(Z), [[6.0, 16.0], [1.0, 1.0]])
    with pytest.raises(ValueError):
        PolyVectorField(2, (((1, (1,)),), ()))
