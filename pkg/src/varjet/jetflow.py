"""Polynomial vector fields and transport of variational jets along complex paths.

Jets use the derivative normalization: ``Y_j`` maps ``sym_power(u, j)`` to
``D^j psi [u, ..., u]``, so the Taylor coefficient of ``u**alpha`` in the flow
equals ``Y_j[:, alpha] / alpha!``.  Internally the whole jet (base point
included) is carried as truncated multivariate polynomials and pushed through
the field by the kernel in ``varjet.kernels``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.integrate import DOP853

from . import kernels
from .cpath import PolygonalPath, min_distance
from .errors import SingularityTooClose, StepUnderflow
from .symtensor import (
    SymMap,
    faa_coeff,
    monomial_basis,
    partitions,
    sym_dim,
    sym_map_product,
)

__all__ = [
    "PolyVectorField",
    "IntegratorConfig",
    "JetState",
    "deriv_tensors",
    "ve_rhs",
    "integrate_path",
    "integrate_jet",
    "flow_fd_oracle",
]

Term = tuple[complex, tuple[int, ...]]


@dataclass(frozen=True)
class PolyVectorField:
    """Polynomial field on C^n given as per-component ``(coefficient, exponents)`` terms."""

    n: int
    terms: tuple[tuple[Term, ...], ...]

    def __post_init__(self):
        if len(self.terms) != self.n:
            raise ValueError(f"need {self.n} components, got {len(self.terms)}")
        clean = []
        for comp in self.terms:
            merged: dict[tuple[int, ...], complex] = {}
            for c, e in comp:
                e = tuple(int(a) for a in e)
                if len(e) != self.n or min(e) < 0:
                    raise ValueError(f"bad exponent vector {e}")
                merged[e] = merged.get(e, 0) + complex(c)
            clean.append(tuple((c, e) for e, c in sorted(merged.items(), reverse=True) if c != 0))
        object.__setattr__(self, "terms", tuple(clean))

    @property
    def degree(self) -> int:
        return max((sum(e) for comp in self.terms for _, e in comp), default=0)

    @classmethod
    def linear(cls, matrix) -> "PolyVectorField":
        A = np.asarray(matrix, dtype=complex)
        n = A.shape[0]
        eye = np.eye(n, dtype=int)
        return cls(n, tuple(tuple((A[i, j], tuple(eye[j])) for j in range(n) if A[i, j] != 0) for i in range(n)))

    @classmethod
    def random(cls, n: int, degree: int, rng: np.random.Generator, scale: float = 1.0) -> "PolyVectorField":
        """Dense random field with complex coefficients of size ``scale``."""
        terms = []
        for _ in range(n):
            comp = []
            for d in range(degree + 1):
                for e in monomial_basis(n, d):
                    c = scale * (rng.normal() + 1j * rng.normal()) / (1 + d)
                    comp.append((c, e))
            terms.append(tuple(comp))
        return cls(n, tuple(terms))

    def __call__(self, z) -> np.ndarray:
        """Direct evaluation; ``z`` has shape ``(n,)`` or ``(n, batch)``."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for i, comp in enumerate(self.terms):
            for c, e in comp:
                term = c
                for zi, a in zip(z, e):
                    if a:
                        term = term * zi**a
                out[i] = out[i] + term
        return out

    def kernel(self, order: int, backend: str | None = None):
        """Compiled jet evaluator for jets of ``order`` (cached per order and backend)."""
        key = (order, backend or kernels.BACKEND)
        cache = self.__dict__.setdefault("_kernels", {})
        if key not in cache:
            cache[key] = kernels.build_kernel(self.n, self.terms, order, backend=key[1])
        return cache[key]


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances for the adaptive order-8 integrator; steps are measured in ``|t|``."""

    rtol: float = 1e-12
    atol: float = 1e-14
    max_step: float = 0.25
    min_step: float = 1e-10
    clearance: float = 0.3
    max_steps_per_segment: int = 200_000

    def __post_init__(self):
        if self.rtol <= 0 or self.atol <= 0:
            raise ValueError("tolerances must be positive")
        if self.clearance < 0:
            raise ValueError("clearance radius must be non-negative")


@dataclass
class JetState:
    """Base point and derivative blocks ``Y_1..Y_k`` at time ``t``."""

    t: complex
    base: np.ndarray
    blocks: list[SymMap]
    steps: int = 0

    @property
    def order(self) -> int:
        return len(self.blocks)

    @property
    def n(self) -> int:
        return len(self.base)

    @classmethod
    def identity(cls, t: complex, base, order: int) -> "JetState":
        base = np.asarray(base, dtype=complex)
        n = len(base)
        blocks = [SymMap(n, 1, 1, np.eye(n, dtype=complex))]
        blocks += [SymMap(n, j, 1, np.zeros((n, sym_dim(n, j)), dtype=complex)) for j in range(2, order + 1)]
        return cls(complex(t), base, blocks)

    def to_taylor(self) -> np.ndarray:
        """Jet as an ``(n, M)`` array of Taylor coefficients (kernel layout)."""
        lay = kernels.jet_layout(self.n, self.order)
        w = kernels.factorial_weights(self.n, self.order)
        out = np.zeros((self.n, lay.size), dtype=complex)
        out[:, 0] = self.base
        for j, Y in enumerate(self.blocks, 1):
            out[:, lay.degree_slice(j)] = Y.entries
        out[:, 1:] /= w[1:]
        return out

    @classmethod
    def from_taylor(cls, t: complex, coef: np.ndarray, order: int, steps: int = 0) -> "JetState":
        n = coef.shape[0]
        lay = kernels.jet_layout(n, order)
        scaled = coef * kernels.factorial_weights(n, order)
        blocks = [SymMap(n, j, 1, scaled[:, lay.degree_slice(j)].copy()) for j in range(1, order + 1)]
        return cls(complex(t), coef[:, 0].copy(), blocks, steps)

    def flow_approx(self, u) -> np.ndarray:
        """``base + sum_j Y_j(u^j)/j!`` (the truncated flow at displacement ``u``)."""
        from .symtensor import sym_power

        out = self.base.astype(complex).copy()
        for j, Y in enumerate(self.blocks, 1):
            out = out + Y.entries @ sym_power(np.asarray(u, dtype=complex), j).coords / math.factorial(j)
        return out


def deriv_tensors(X: PolyVectorField, point, k: int) -> list[SymMap]:
    """Derivative tensors ``A_1..A_k`` of ``X`` at ``point`` (derivative normalization)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    point = np.asarray(point, dtype=complex)
    n = X.n
    jet = JetState.identity(0, point, k).to_taylor()
    out = np.empty_like(jet)
    X.kernel(k)(jet, 1.0, out)
    scaled = out * kernels.factorial_weights(n, k)
    lay = kernels.jet_layout(n, k)
    return [SymMap(n, j, 1, scaled[:, lay.degree_slice(j)].copy()) for j in range(1, k + 1)]


class _ProductCache:
    """Memoized symmetric products ``Y_{i1} . ... . Y_{ir}`` for one set of blocks."""

    def __init__(self, blocks: Sequence[SymMap]):
        self.blocks = blocks
        self.memo: dict[tuple[int, ...], SymMap] = {}

    def __call__(self, parts: tuple[int, ...]) -> SymMap:
        parts = tuple(sorted(parts, reverse=True))
        if parts in self.memo:
            return self.memo[parts]
        if len(parts) == 1:
            out = self.blocks[parts[0] - 1]
        else:
            out = sym_map_product(self(parts[:-1]), self.blocks[parts[-1] - 1])
        self.memo[parts] = out
        return out


def ve_rhs(A: Sequence[SymMap], Y: Sequence[SymMap]) -> list[SymMap]:
    """Right-hand sides ``dY_1..dY_k`` of the order-k variational hierarchy.

    ``dY_k = sum_j A_j sum_{parts} faa_coeff(parts) * (Y_{i1} . ... . Y_{ij})`` over
    multisets ``{i1..ij}`` summing to ``k``.
    """
    k = len(Y)
    if len(A) < k:
        raise ValueError(f"need {k} derivative tensors, got {len(A)}")
    n = Y[0].n
    for j, (a, y) in enumerate(zip(A, Y), 1):
        if a.a != j or y.a != j or a.n != n or y.n != n:
            raise ValueError("shape mismatch between derivative tensors and jet blocks")
    prod = _ProductCache(Y)
    out = []
    for kk in range(1, k + 1):
        acc = np.zeros((n, sym_dim(n, kk)), dtype=complex)
        for j in range(1, kk + 1):
            Aj = A[j - 1].entries
            if not np.any(Aj):
                continue
            for parts in partitions(kk, j):
                acc += faa_coeff(parts) * (Aj @ prod(parts).entries)
        out.append(SymMap(n, kk, 1, acc))
    return out


def _check_clearance(path: PolygonalPath, singularities, cfg: IntegratorConfig) -> None:
    if singularities is None:
        return
    d = min_distance(path, singularities)
    if d < cfg.clearance:
        raise SingularityTooClose(f"path comes within {d:.3g} of a singularity (clearance {cfg.clearance})")


def integrate_path(
    rhs: Callable[[np.ndarray, complex], np.ndarray],
    y0,
    path: PolygonalPath,
    cfg: IntegratorConfig | None = None,
    singularities: Iterable[complex] | None = None,
    monitor: Callable[[np.ndarray], None] | None = None,
) -> tuple[np.ndarray, int]:
    """Integrate ``dy/dt = f(y)`` along ``path``.

    ``rhs(y, scale)`` must return ``scale * f(y)``; each segment ``[a, b]`` is run
    in the real parameter ``s`` with ``t = a + s (b - a)`` by an adaptive
    Dormand-Prince 8(5,3) pair.  Returns the final state and the number of
    accepted steps.
    """
    cfg = cfg or IntegratorConfig()
    _check_clearance(path, singularities, cfg)
    y = np.array(y0, dtype=complex).ravel()
    steps = 0
    for a, b in path.segments():
        scale = b - a
        length = abs(scale)
        solver = DOP853(
            lambda s, yy: rhs(yy, scale),
            0.0,
            y,
            1.0,
            rtol=cfg.rtol,
            atol=cfg.atol,
            max_step=cfg.max_step / length,
        )
        min_s = cfg.min_step / length
        seg_steps = 0
        while solver.status == "running":
            msg = solver.step()
            if solver.status == "failed":
                raise StepUnderflow(f"integration failed on segment {a} -> {b}: {msg}")
            seg_steps += 1
            if solver.status == "running" and solver.step_size < min_s:
                raise StepUnderflow(
                    f"step {solver.step_size * length:.3g} below minimum on segment {a} -> {b} "
                    f"at t = {a + solver.t * scale}"
                )
            if seg_steps > cfg.max_steps_per_segment:
                raise StepUnderflow(f"more than {cfg.max_steps_per_segment} steps on segment {a} -> {b}")
            if monitor is not None:
                monitor(solver.y)
        y = solver.y
        steps += seg_steps
    return y, steps


def _poly_rhs(X: PolyVectorField, order: int, backend: str | None = None):
    kern = X.kernel(order, backend)
    n = X.n
    M = kernels.jet_layout(n, order).size

    def rhs(y, scale):
        out = np.empty((n, M), dtype=complex)
        kern(y.reshape(n, M), scale, out)
        return out.ravel()

    return rhs


def _block_rhs(X: PolyVectorField, order: int):
    """Augmented system (base, Y_1..Y_k) driven by ``ve_rhs``; reference engine."""
    n = X.n
    sizes = [n] + [n * sym_dim(n, j) for j in range(1, order + 1)]
    cuts = np.cumsum(sizes)[:-1]

    def rhs(y, scale):
        parts = np.split(y, cuts)
        base = parts[0]
        Y = [SymMap(n, j, 1, parts[j].reshape(n, sym_dim(n, j))) for j in range(1, order + 1)]
        A = deriv_tensors(X, base, order)
        dY = ve_rhs(A, Y)
        return scale * np.concatenate([X(base)] + [d.entries.ravel() for d in dY])

    return rhs, cuts


def integrate_jet(
    X: PolyVectorField,
    ivp,
    path: PolygonalPath,
    k: int,
    cfg: IntegratorConfig | None = None,
    singularities: Iterable[complex] | None = None,
    engine: str = "poly",
    backend: str | None = None,
) -> JetState:
    """Transport the order-``k`` jet of the flow from ``path.start`` to ``path.end``.

    ``engine="poly"`` (default) carries the jet as truncated polynomials through
    the compiled kernel; ``engine="blocks"`` integrates ``(base, Y_1..Y_k)``
    with :func:`ve_rhs` and is kept as an independent cross-check.
    """
    if k < 1:
        raise ValueError("order must be >= 1")
    start = JetState.identity(path.start, ivp, k)
    if engine == "poly":
        y0 = start.to_taylor()
        y, steps = integrate_path(_poly_rhs(X, k, backend), y0, path, cfg, singularities)
        return JetState.from_taylor(path.end, y.reshape(X.n, -1), k, steps)
    if engine == "blocks":
        rhs, cuts = _block_rhs(X, k)
        y0 = np.concatenate([start.base] + [Y.entries.ravel() for Y in start.blocks])
        y, steps = integrate_path(rhs, y0, path, cfg, singularities)
        parts = np.split(y, cuts)
        n = X.n
        blocks = [SymMap(n, j, 1, parts[j].reshape(n, sym_dim(n, j)).copy()) for j in range(1, k + 1)]
        return JetState(path.end, parts[0].copy(), blocks, steps)
    raise ValueError(f"unknown engine {engine!r}")


# --- finite-difference oracle -------------------------------------------------

_STENCILS = {
    0: ((0, 1.0),),
    1: ((-1, -0.5), (1, 0.5)),
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    3: ((-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)),
}


def _rk4_flow(X: PolyVectorField, Z0: np.ndarray, path: PolygonalPath, h: float) -> np.ndarray:
    """Fixed-step classical RK4 for a batch of initial conditions ``Z0`` of shape ``(n, B)``.

    The step sequence does not depend on the initial condition, so the
    discrete flow is smooth in ``Z0`` and can be differentiated numerically.
    """
    Z = Z0.astype(complex)
    for a, b in path.segments():
        nsteps = max(1, math.ceil(abs(b - a) / h))
        dt = (b - a) / nsteps
        for _ in range(nsteps):
            k1 = X(Z)
            k2 = X(Z + 0.5 * dt * k1)
            k3 = X(Z + 0.5 * dt * k2)
            k4 = X(Z + dt * k3)
            Z = Z + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
    return Z


def flow_fd_oracle(
    X: PolyVectorField,
    ivp,
    path: PolygonalPath,
    k: int,
    h: float = 1e-3,
    step: float = 2e-3,
) -> list[SymMap]:
    """Jet blocks ``Y_1..Y_k`` from central differences of the plain flow.

    Every mixed partial ``d^alpha psi`` is a tensor product of one-dimensional
    central stencils with spacing ``h`` in each initial coordinate; all
    perturbed initial conditions are integrated in one batch with fixed-step RK4
    of step ``step``.  Only ``k <= 3`` is supported.
    """
    if not 1 <= k <= 3:
        raise ValueError("finite-difference oracle supports 1 <= k <= 3")
    ivp = np.asarray(ivp, dtype=complex)
    n = len(ivp)
    plans = []
    offsets: dict[tuple[int, ...], int] = {}
    for j in range(1, k + 1):
        for alpha in monomial_basis(n, j):
            combos = [()]
            for a in alpha:
                combos = [c + (s,) for c in combos for s in _STENCILS[a]]
            terms = []
            for combo in combos:
                off = tuple(o for o, _ in combo)
                w = math.prod(wt for _, wt in combo)
                if off not in offsets:
                    offsets[off] = len(offsets)
                terms.append((offsets[off], w))
            plans.append((j, alpha, terms))
    pts = np.array(list(offsets), dtype=float).T  # (n, B)
    Z = _rk4_flow(X, ivp[:, None] + h * pts, path, step)
    blocks = [np.zeros((n, sym_dim(n, j)), dtype=complex) for j in range(1, k + 1)]
    from .symtensor import monomial_index

    for j, alpha, terms in plans:
        val = sum(w * Z[:, idx] for idx, w in terms) / h**j
        blocks[j - 1][:, monomial_index(alpha)] = val
    return [SymMap(n, j, 1, blocks[j - 1]) for j in range(1, k + 1)]
