"""Truncated multivariate polynomial ("jet") evaluation of polynomial fields.

A jet of order ``K`` in ``n`` variables is the array of Taylor coefficients of
all monomials of degree ``<= K``, degree-ascending and graded-lex inside each
degree.  Evaluating a polynomial vector field on ``n`` such jets is the inner
loop of every variational integration, so it is compiled when possible.

The compiled core lives in ``varjet._fieldkernel`` (Cython).  If it is missing,
or ``VARJET_PURE_PYTHON=1`` is set, the numpy implementation in
``varjet._fieldkernel_py`` is used instead; both expose ``FieldKernel`` with
the same constructor and ``__call__(state, scale, out)``.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .symtensor import monomial_basis

try:
    if os.environ.get("VARJET_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure python requested")
    from ._fieldkernel import FieldKernel as _CFieldKernel
except ImportError:  # pragma: no cover - depends on build
    _CFieldKernel = None

from ._fieldkernel_py import FieldKernel as PyFieldKernel

BACKEND = "cython" if _CFieldKernel is not None else "python"

__all__ = ["BACKEND", "JetLayout", "jet_layout", "build_kernel", "PyFieldKernel", "compiled_available"]


def compiled_available() -> bool:
    return _CFieldKernel is not None


@dataclass(frozen=True)
class JetLayout:
    """Monomial bookkeeping for jets of order ``order`` in ``n`` variables."""

    n: int
    order: int
    monomials: tuple[tuple[int, ...], ...]
    index: dict
    offsets: tuple[int, ...]  # offsets[d] = first slot of degree d
    pair_i: np.ndarray
    pair_j: np.ndarray
    pair_l: np.ndarray

    @property
    def size(self) -> int:
        return len(self.monomials)

    def degree_slice(self, d: int) -> slice:
        return slice(self.offsets[d], self.offsets[d + 1])


@lru_cache(maxsize=None)
def jet_layout(n: int, order: int) -> JetLayout:
    monos: list[tuple[int, ...]] = []
    offsets = [0]
    for d in range(order + 1):
        monos.extend(monomial_basis(n, d))
        offsets.append(len(monos))
    index = {e: i for i, e in enumerate(monos)}
    deg = [sum(e) for e in monos]
    I, J, L = [], [], []
    for i, ei in enumerate(monos):
        for j, ej in enumerate(monos):
            if deg[i] + deg[j] > order:
                continue
            I.append(i)
            J.append(j)
            L.append(index[tuple(a + b for a, b in zip(ei, ej))])
    # sort by target so accumulation order is fixed
    order_ = np.lexsort((np.array(J), np.array(I), np.array(L)))
    return JetLayout(
        n,
        order,
        tuple(monos),
        index,
        tuple(offsets),
        np.ascontiguousarray(np.array(I, dtype=np.int32)[order_]),
        np.ascontiguousarray(np.array(J, dtype=np.int32)[order_]),
        np.ascontiguousarray(np.array(L, dtype=np.int32)[order_]),
    )


def _program(n: int, terms) -> tuple[list, list, list, list, list, list, int]:
    """Slot program computing every monomial of the field from the variables.

    Slot 0 is the constant jet 1, slots ``1..n`` the variables.  Each further
    slot is ``slot[src] * variable[var]``.  Returns op arrays, term arrays and
    the number of slots.
    """
    slot_of: dict[tuple[int, ...], int] = {(0,) * n: 0}
    for i in range(n):
        e = [0] * n
        e[i] = 1
        slot_of[tuple(e)] = 1 + i
    needed = set()
    for comp in terms:
        for _, e in comp:
            needed.add(tuple(e))
    # closure under "drop one from the first nonzero exponent"
    stack = list(needed)
    while stack:
        e = stack.pop()
        if sum(e) <= 1:
            continue
        v = next(i for i, a in enumerate(e) if a)
        src = list(e)
        src[v] -= 1
        src = tuple(src)
        if src not in needed:
            needed.add(src)
            stack.append(src)
    op_dst, op_src, op_var = [], [], []
    for e in sorted(needed, key=lambda e: (sum(e), tuple(-a for a in e))):
        if e in slot_of:
            continue
        v = next(i for i, a in enumerate(e) if a)
        src = list(e)
        src[v] -= 1
        slot_of[e] = len(slot_of)
        op_dst.append(slot_of[e])
        op_src.append(slot_of[tuple(src)])
        op_var.append(1 + v)
    t_comp, t_slot, t_coef = [], [], []
    for c, comp in enumerate(terms):
        for coef, e in comp:
            if coef == 0:
                continue
            t_comp.append(c)
            t_slot.append(slot_of[tuple(e)])
            t_coef.append(complex(coef))
    return op_dst, op_src, op_var, t_comp, t_slot, t_coef, len(slot_of)


def build_kernel(n: int, terms, order: int, backend: str | None = None):
    """Compile a field (per-component lists of ``(coef, exponents)``) for jets of ``order``."""
    lay = jet_layout(n, order)
    op_dst, op_src, op_var, t_comp, t_slot, t_coef, n_slots = _program(n, terms)
    i32 = lambda x: np.ascontiguousarray(np.asarray(x, dtype=np.int32))
    args = (
        n,
        lay.size,
        n_slots,
        lay.pair_i,
        lay.pair_j,
        lay.pair_l,
        i32(op_dst),
        i32(op_src),
        i32(op_var),
        i32(t_comp),
        i32(t_slot),
        np.ascontiguousarray(np.asarray(t_coef, dtype=np.complex128)),
    )
    backend = backend or BACKEND
    if backend == "cython":
        if _CFieldKernel is None:
            raise RuntimeError("compiled kernel is not available")
        return _CFieldKernel(*args)
    if backend == "python":
        return PyFieldKernel(*args)
    raise ValueError(f"unknown backend {backend!r}")


def factorial_weights(n: int, order: int) -> np.ndarray:
    """``alpha!`` for every slot of the jet layout (Taylor <-> derivative scaling)."""
    lay = jet_layout(n, order)
    return np.array([math.prod(math.factorial(a) for a in e) for e in lay.monomials], dtype=float)
