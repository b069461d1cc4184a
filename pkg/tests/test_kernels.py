import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from varjet import kernels
from varjet.jetflow import PolyVectorField, deriv_tensors


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")
    assert kernels.compiled_available() == (kernels.BACKEND == "cython")


def test_layout_degree_ascending():
    lay = kernels.jet_layout(2, 2)
    assert lay.monomials == ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))
    assert lay.degree_slice(2) == slice(3, 6)


def _poly_mul_reference(a, b, lay):
    """Truncated product by brute force over monomial pairs."""
    out = np.zeros(lay.size, dtype=complex)
    for i, ei in enumerate(lay.monomials):
        for j, ej in enumerate(lay.monomials):
            e = tuple(x + y for x, y in zip(ei, ej))
            if sum(e) <= lay.order:
                out[lay.index[e]] += a[i] * b[j]
    return out


@given(st.integers(0, 10_000), st.integers(1, 3), st.integers(1, 4))
def test_kernel_matches_brute_force(seed, n, order):
    rng = np.random.default_rng(seed)
    X = PolyVectorField.random(n, 3, rng)
    lay = kernels.jet_layout(n, order)
    state = rng.normal(size=(n, lay.size)) + 1j * rng.normal(size=(n, lay.size))
    ref = np.zeros((n, lay.size), dtype=complex)
    for comp, terms in enumerate(X.terms):
        for c, e in terms:
            acc = np.zeros(lay.size, dtype=complex)
            acc[0] = 1
            for var, a in enumerate(e):
                for _ in range(a):
                    acc = _poly_mul_reference(acc, state[var], lay)
            ref[comp] += c * acc
    for backend in (["python", "cython"] if kernels.compiled_available() else ["python"]):
        out = np.empty_like(ref)
        X.kernel(order, backend)(state, 0.5, out)
        assert np.allclose(out, 0.5 * ref, rtol=1e-12, atol=1e-12)


@pytest.mark.skipif(not kernels.compiled_available(), reason="compiled kernel not built")
@given(st.integers(0, 10_000), st.integers(1, 4), st.integers(1, 5))
def test_backends_agree(seed, n, order):
    rng = np.random.default_rng(seed)
    X = PolyVectorField.random(n, 3, rng)
    lay = kernels.jet_layout(n, order)
    state = rng.normal(size=(n, lay.size)) + 1j * rng.normal(size=(n, lay.size))
    a = np.empty((n, lay.size), dtype=complex)
    b = np.empty_like(a)
    X.kernel(order, "cython")(state, 1 - 2j, a)
    X.kernel(order, "python")(state, 1 - 2j, b)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


def test_unknown_backend():
    X = PolyVectorField.linear(np.eye(2))
    with pytest.raises(ValueError):
        X.kernel(2, "fortran")


def test_derivative_tensors_of_cubic():
    # f(x) = x^3 in one variable: A1 = 3x^2, A2 = 6x, A3 = 6
    X = PolyVectorField(1, (((1, (3,)),),))
    A = deriv_tensors(X, [2.0], 4)
    assert [complex(a.entries[0, 0]) for a in A] == [12, 12, 6, 0]


def test_derivative_tensor_mixed_partial():
    # f = x^2 y: d2f/dxdy = 2x, stored at alpha = (1,1) with alpha! = 1
    X = PolyVectorField(2, (((1, (2, 1)),), ()))
    A2 = deriv_tensors(X, [3.0, 5.0], 2)[1]
    assert A2.entries[0].tolist() == [10, 6, 0]
