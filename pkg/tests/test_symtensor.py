from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from varjet.symtensor import (
    SymMap,
    SymVector,
    cumulative_dim,
    faa_coeff,
    monomial_basis,
    monomial_index,
    multinomial,
    partitions,
    sym_dim,
    sym_identity,
    sym_map_product,
    sym_power,
    sym_vec_product,
)

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def exact_vec(n, k, data):
    coords = np.array([data.draw(fractions) for _ in range(sym_dim(n, k))], dtype=object)
    return SymVector(n, k, coords)


def random_map(rng, n, a, b):
    shape = (sym_dim(n, b), sym_dim(n, a))
    return SymMap(n, a, b, rng.normal(size=shape) + 1j * rng.normal(size=shape))


@pytest.mark.parametrize("n,k,d", [(4, 1, 4), (4, 2, 10), (4, 3, 20), (4, 4, 35), (4, 5, 56), (2, 3, 4), (3, 0, 1)])
def test_sym_dim(n, k, d):
    assert sym_dim(n, k) == d


def test_cumulative_dim_monodromy_sizes():
    # 4x4, 14x14, 34x34 and 125x125 monodromies
    assert [cumulative_dim(4, k) for k in (1, 2, 3, 5)] == [4, 14, 34, 125]


def test_sym_dim_rejects_bad_input():
    with pytest.raises(ValueError):
        sym_dim(0, 2)


def test_monomial_basis_graded_lex():
    assert monomial_basis(2, 2) == ((2, 0), (1, 1), (0, 2))
    assert monomial_basis(3, 1) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    b = monomial_basis(4, 5)
    assert list(b) == sorted(b, reverse=True)
    # the pure normal-coordinate powers sit at 1-based columns 36 and 56
    assert b.index((0, 5, 0, 0)) + 1 == 36
    assert b.index((0, 0, 0, 5)) + 1 == 56
    assert monomial_index((0, 4, 0, 1)) + 1 == 38


def test_multinomial_and_faa():
    assert multinomial((2, 1, 0)) == 3
    assert faa_coeff((3, 2)) == 10
    assert faa_coeff((2, 2, 1)) == 15
    assert faa_coeff((4, 1)) == 5
    assert faa_coeff((1, 1, 1)) == 1
    with pytest.raises(ValueError):
        faa_coeff(())


@given(st.integers(1, 9))
def test_faa_coefficients_count_set_partitions(k):
    # summing over all multisets gives the Bell number
    bell = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147]
    assert sum(faa_coeff(p) for p in partitions(k)) == bell[k]


@given(st.integers(1, 8), st.integers(1, 8))
def test_partitions_fixed_parts(k, r):
    ps = partitions(k, r)
    assert all(len(p) == r and sum(p) == k and list(p) == sorted(p, reverse=True) for p in ps)
    assert len(set(ps)) == len(ps)


@given(st.data(), st.integers(1, 3), st.integers(0, 3), st.integers(0, 3))
def test_vector_product_commutative_exact(data, n, a, b):
    x, y = exact_vec(n, a, data), exact_vec(n, b, data)
    assert list((x * y).coords) == list((y * x).coords)


@given(st.data(), st.integers(1, 3), st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
def test_vector_product_associative_exact(data, n, a, b, c):
    x, y, z = exact_vec(n, a, data), exact_vec(n, b, data), exact_vec(n, c, data)
    assert list(((x * y) * z).coords) == list((x * (y * z)).coords)


@given(st.data(), st.integers(1, 3), st.integers(0, 2), st.integers(0, 2))
def test_vector_product_bilinear_exact(data, n, a, b):
    x, x2, y = exact_vec(n, a, data), exact_vec(n, a, data), exact_vec(n, b, data)
    s = data.draw(fractions)
    lhs = SymVector(n, a, x.coords + s * x2.coords) * y
    rhs = (x * y).coords + s * (x2 * y).coords
    assert list(lhs.coords) == list(rhs)


@given(st.lists(fractions, min_size=1, max_size=3), st.integers(0, 3), st.integers(0, 3))
def test_powers_multiply_exact(u, a, b):
    u = np.array(u, dtype=object)
    assert list((sym_power(u, a) * sym_power(u, b)).coords) == list(sym_power(u, a + b).coords)


def test_power_coordinates():
    # coordinate at alpha is multinomial(k; alpha) u^alpha
    u = np.array([Fraction(2), Fraction(3)], dtype=object)
    assert list(sym_power(u, 2).coords) == [4, 12, 9]


@given(st.integers(0, 10_000), st.integers(1, 3), st.integers(1, 3), st.integers(1, 2), st.integers(1, 3), st.integers(1, 2))
def test_map_product_defining_property(seed, n, a, b, c, d):
    rng = np.random.default_rng(seed)
    F, G = random_map(rng, n, a, b), random_map(rng, n, c, d)
    w = rng.normal(size=n) + 1j * rng.normal(size=n)
    lhs = sym_map_product(F, G)(sym_power(w, a + c)).coords
    rhs = sym_vec_product(F(sym_power(w, a)), G(sym_power(w, c))).coords
    assert np.max(np.abs(lhs - rhs)) < 1e-12 * max(1.0, np.max(np.abs(rhs)))


@given(st.integers(0, 10_000), st.integers(1, 3), st.integers(1, 3))
def test_identity_powers(seed, n, k):
    # Id^{.k} acts as the identity on S^k
    ident = sym_identity(n, 1)
    P = ident
    for _ in range(k - 1):
        P = sym_map_product(P, ident)
    assert np.allclose(P.entries, np.eye(sym_dim(n, k)), atol=1e-14)


@given(st.integers(0, 10_000), st.integers(1, 3))
def test_map_product_commutes(seed, n):
    rng = np.random.default_rng(seed)
    F, G = random_map(rng, n, 1, 1), random_map(rng, n, 2, 1)
    assert np.allclose(sym_map_product(F, G).entries, sym_map_product(G, F).entries, atol=1e-12)


def test_map_product_of_linear_maps_is_induced_action():
    # (A.A)(u^2) = (Au)^2 for a 2x2 matrix
    A = np.array([[1.0, 2.0], [3.0, 4.0]])
    F = SymMap(2, 1, 1, A)
    u = np.array([0.5, -1.5])
    got = sym_map_product(F, F)(sym_power(u, 2)).coords
    assert np.allclose(got, sym_power(A @ u, 2).coords)


def test_shape_checks():
    with pytest.raises(ValueError):
        SymVector(2, 2, np.zeros(2))
    with pytest.raises(ValueError):
        SymMap(2, 1, 1, np.zeros((3, 2)))
    F = SymMap(2, 1, 1, np.eye(2))
    with pytest.raises(ValueError):
        F(sym_power(np.ones(2), 2))
    with pytest.raises(ValueError):
        sym_map_product(F, SymMap(3, 1, 1, np.eye(3)))
