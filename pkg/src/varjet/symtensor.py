"""Symmetric powers of C^n in power coordinates.

A vector of ``S^k(C^n)`` is stored as its coordinates on the degree-``k``
monomials, listed in graded-lexicographic order (exponent tuples sorted
descending, so ``(2,0), (1,1), (0,2)`` for ``n = k = 2``).  The power of a
vector ``u`` has coordinate ``multinomial(k; alpha) * u**alpha`` at ``alpha``,
which makes the vector product a plain convolution over exponents and
``sym_power(u, a) (.) sym_power(u, b) == sym_power(u, a + b)``.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
import scipy.sparse as sp

__all__ = [
    "sym_dim",
    "cumulative_dim",
    "monomial_basis",
    "monomial_index",
    "multinomial",
    "SymVector",
    "SymMap",
    "sym_power",
    "sym_vec_product",
    "sym_map_product",
    "sym_identity",
    "faa_coeff",
    "partitions",
]


def sym_dim(n: int, k: int) -> int:
    """Dimension ``binom(n + k - 1, n - 1)`` of ``S^k(C^n)``."""
    if n < 1 or k < 0:
        raise ValueError(f"need n >= 1 and k >= 0, got n={n}, k={k}")
    return math.comb(n + k - 1, n - 1)


def cumulative_dim(n: int, k: int) -> int:
    """Size ``sum_{j=1..k} d_{n,j}`` of an order-``k`` block fundamental matrix."""
    return sum(sym_dim(n, j) for j in range(1, k + 1))


@lru_cache(maxsize=None)
def monomial_basis(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of degree ``k`` in ``n`` variables, graded-lex order."""
    sym_dim(n, k)
    out = []
    for combo in itertools.combinations_with_replacement(range(n), k):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    # combinations_with_replacement over sorted variables already yields
    # descending exponent tuples; sort anyway so the order is explicit
    out.sort(reverse=True)
    return tuple(out)


@lru_cache(maxsize=None)
def _index_map(n: int, k: int) -> dict[tuple[int, ...], int]:
    return {e: i for i, e in enumerate(monomial_basis(n, k))}


def monomial_index(exponents: Sequence[int]) -> int:
    """Position (0-based) of an exponent vector inside its degree block."""
    e = tuple(int(x) for x in exponents)
    return _index_map(len(e), sum(e))[e]


def multinomial(exponents: Sequence[int]) -> int:
    k = sum(exponents)
    out = math.factorial(k)
    for a in exponents:
        out //= math.factorial(a)
    return out


@lru_cache(maxsize=None)
def _multinomials(n: int, k: int) -> np.ndarray:
    return np.array([multinomial(e) for e in monomial_basis(n, k)], dtype=float)


@lru_cache(maxsize=None)
def _factorials(n: int, k: int) -> np.ndarray:
    """``alpha!`` for every exponent of degree ``k``."""
    return np.array(
        [math.prod(math.factorial(a) for a in e) for e in monomial_basis(n, k)],
        dtype=float,
    )


@dataclass(frozen=True)
class SymVector:
    """Element of ``S^degree(C^n)``."""

    n: int
    degree: int
    coords: np.ndarray

    def __post_init__(self):
        if len(self.coords) != sym_dim(self.n, self.degree):
            raise ValueError(
                f"expected {sym_dim(self.n, self.degree)} coordinates, got {len(self.coords)}"
            )

    def __mul__(self, other: "SymVector") -> "SymVector":
        return sym_vec_product(self, other)


@dataclass(frozen=True)
class SymMap:
    """Linear map ``S^a(C^n) -> S^b(C^n)`` stored as a ``d_{n,b} x d_{n,a}`` matrix."""

    n: int
    a: int
    b: int
    entries: np.ndarray

    def __post_init__(self):
        shape = (sym_dim(self.n, self.b), sym_dim(self.n, self.a))
        if self.entries.shape != shape:
            raise ValueError(f"SymMap {self.a}->{self.b} needs shape {shape}, got {self.entries.shape}")

    def __call__(self, v: SymVector) -> SymVector:
        if v.n != self.n or v.degree != self.a:
            raise ValueError("argument degree does not match map input degree")
        return SymVector(self.n, self.b, self.entries @ v.coords)

    def __matmul__(self, other: "SymMap") -> "SymMap":
        if other.b != self.a or other.n != self.n:
            raise ValueError("composition degree mismatch")
        return SymMap(self.n, other.a, self.b, self.entries @ other.entries)


def sym_power(u: Sequence[complex], k: int) -> SymVector:
    u = np.asarray(u)
    n = len(u)
    basis = monomial_basis(n, k)
    # object dtype keeps Fractions exact; numeric input stays numeric
    if u.dtype == object:
        coords = np.array(
            [multinomial(e) * math.prod(ui**ei for ui, ei in zip(u, e)) for e in basis],
            dtype=object,
        )
    else:
        E = np.array(basis, dtype=int).reshape(len(basis), n)
        coords = _multinomials(n, k) * np.prod(u[None, :] ** E, axis=1)
    return SymVector(n, k, coords)


@lru_cache(maxsize=None)
def _conv_triples(n: int, a: int, b: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Index triples (i, j, l) with ``basis_a[i] + basis_b[j] == basis_{a+b}[l]``."""
    ba, bb = monomial_basis(n, a), monomial_basis(n, b)
    idx = _index_map(n, a + b)
    I, J, L = [], [], []
    for i, ea in enumerate(ba):
        for j, eb in enumerate(bb):
            I.append(i)
            J.append(j)
            L.append(idx[tuple(x + y for x, y in zip(ea, eb))])
    return np.array(I), np.array(J), np.array(L)


def sym_vec_product(x: SymVector, y: SymVector) -> SymVector:
    """Convolution product ``S^a x S^b -> S^{a+b}``."""
    if x.n != y.n:
        raise ValueError("vectors live in symmetric powers of different spaces")
    n = x.n
    I, J, L = _conv_triples(n, x.degree, y.degree)
    if x.coords.dtype == object or y.coords.dtype == object:
        out = np.array([0] * sym_dim(n, x.degree + y.degree), dtype=object)
        for i, j, l in zip(I, J, L):
            out[l] += x.coords[i] * y.coords[j]
    else:
        out = np.zeros(sym_dim(n, x.degree + y.degree), dtype=np.result_type(x.coords, y.coords))
        np.add.at(out, L, x.coords[I] * y.coords[J])
    return SymVector(n, x.degree + y.degree, out)


@lru_cache(maxsize=None)
def _gather(n: int, p: int, q: int) -> sp.csr_matrix:
    """0/1 matrix folding ``kron(S^p, S^q)`` coordinates onto ``S^{p+q}``."""
    I, J, L = _conv_triples(n, p, q)
    dq = sym_dim(n, q)
    return sp.csr_matrix(
        (np.ones(len(I)), (L, I * dq + J)), shape=(sym_dim(n, p + q), sym_dim(n, p) * dq)
    )


@lru_cache(maxsize=None)
def _spread(n: int, a: int, b: int) -> sp.csr_matrix:
    """Weighted matrix taking ``S^{a+b}`` columns to pairs of ``S^a x S^b`` columns.

    Column ``gamma`` receives ``prod binom(gamma_i, beta_i) / binom(a+b, a)`` from
    every split ``gamma = beta + beta'``; this is what makes the defining identity
    ``(F.G)(w^{a+b}) = F(w^a) . G(w^b)`` hold on powers.
    """
    ba = monomial_basis(n, a)
    I, J, L = _conv_triples(n, a, b)
    full = monomial_basis(n, a + b)
    denom = math.comb(a + b, a)
    w = np.array(
        [
            math.prod(math.comb(g, x) for g, x in zip(full[l], ba[i])) / denom
            for i, j, l in zip(I, J, L)
        ]
    )
    db = sym_dim(n, b)
    return sp.csr_matrix((w, (I * db + J, L)), shape=(sym_dim(n, a) * db, sym_dim(n, a + b)))


def sym_map_product(F: SymMap, G: SymMap) -> SymMap:
    """Symmetric product of linear maps, ``S^{a+b} -> S^{p+q}``."""
    if F.n != G.n:
        raise ValueError("maps act on symmetric powers of different spaces")
    n = F.n
    K = np.kron(F.entries, G.entries)
    out = _gather(n, F.b, G.b) @ K
    out = (_spread(n, F.a, G.a).T @ out.T).T
    return SymMap(n, F.a + G.a, F.b + G.b, np.asarray(out))


def sym_identity(n: int, k: int = 1, dtype=complex) -> SymMap:
    d = sym_dim(n, k)
    return SymMap(n, k, k, np.eye(d, dtype=dtype))


def partitions(k: int, parts: int | None = None) -> list[tuple[int, ...]]:
    """Multisets of positive integers summing to ``k``, as non-increasing tuples.

    With ``parts`` given, only multisets of exactly that many parts.
    """

    def gen(rem, maxpart):
        if rem == 0:
            yield ()
            return
        for first in range(min(rem, maxpart), 0, -1):
            for rest in gen(rem - first, first):
                yield (first,) + rest

    out = list(gen(k, k))
    if parts is not None:
        out = [p for p in out if len(p) == parts]
    return out


def faa_coeff(parts: Sequence[int]) -> int:
    """Number of set partitions of ``sum(parts)`` labelled points into blocks of these sizes."""
    parts = list(parts)
    if not parts or any(p < 1 for p in parts):
        raise ValueError("parts must be a non-empty multiset of positive integers")
    k = sum(parts)
    out = math.factorial(k)
    for p in parts:
        out //= math.factorial(p)
    for mult in Counter(parts).values():
        out //= math.factorial(mult)
    return out
