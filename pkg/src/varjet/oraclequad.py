"""Nested-quadrature evaluation of the order-5 obstruction coefficient.

The coefficient is the loop integral of an explicit function ``A(t)`` built
from the first-order variational solutions ``f1, f2`` (first invariant-plane
direction), ``g1, g2`` (normal direction) and six nested indefinite integrals.
All of them are carried as states of one scalar ODE integrated along the
commutator loop ``gamma_+, gamma_-, gamma_+^-1, gamma_-^-1``; the particular
solution itself is transported too, so the elliptic/hyperbolic functions in
the integrands are never evaluated as special functions.

State layout::

    0 q1   1 p1                       particular solution (q2 = p2 = 0)
    2 f1   3 f1'  4 f2   5 f2'        tangential first-order solutions
    6 g1   7 g1'  8 g2   9 g2'        normal first-order solutions
    10 F14 11 F15 12 F229 13 F230 14 F321 15 F322
    16 K
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .cpath import PolygonalPath, commutator_path, hexagon_path, spoon_path, T_STAR_LEMNISCATE
from .errors import WronskianDrift
from .frwmodel import FrwParams, sol1, sol2
from .jetflow import IntegratorConfig, integrate_path

__all__ = [
    "QuadratureStack",
    "OracleResult",
    "k436_k1",
    "k436_k0",
    "eval_f1f2",
    "WRONSKIAN_TOL",
]

WRONSKIAN_TOL = 1e-8
N_STATES = 17


@dataclass(frozen=True)
class QuadratureStack:
    """Named view of the augmented oracle state."""

    y: np.ndarray

    q1 = property(lambda s: s.y[0])
    p1 = property(lambda s: s.y[1])
    f1 = property(lambda s: s.y[2])
    f2 = property(lambda s: s.y[4])
    g1 = property(lambda s: s.y[6])
    g2 = property(lambda s: s.y[8])
    K = property(lambda s: s.y[16])

    def wronskians(self) -> tuple[complex, complex]:
        y = self.y
        return y[2] * y[5] - y[4] * y[3], y[6] * y[9] - y[8] * y[7]


@dataclass(frozen=True)
class OracleResult:
    K: complex
    scale: float  # integral of |A| |dt| along the loop
    steps: int
    max_wronskian_drift: float

    def vanishes(self, rtol: float = 1e-7) -> bool:
        return abs(self.K) <= rtol * self.scale


def _initial_state(q1: complex, p1: complex) -> np.ndarray:
    y = np.zeros(N_STATES + 1, dtype=complex)  # last slot accumulates int |A| |dt|
    y[0], y[1] = q1, p1
    y[2] = y[5] = y[6] = y[9] = 1.0
    return y


def _rhs_k1(P: FrwParams):
    k, L, l, m2 = P.k, P.L, P.l, P.m**2
    m4, m6 = m2 * m2, m2 * m2 * m2
    rL = cmath.sqrt(L)

    def rhs(y, scale):
        q1, p1, f1, df1, f2, df2, g1, dg1, g2, dg2 = y[:10]
        F14, F15, F229, F230, F321, F322 = y[10:16]
        th = 1j * rL * q1  # tanh(t/sqrt2) along the particular solution
        a = -k - 3 * L * q1 * q1
        b = -k + m2 * q1 * q1
        G13 = f1 * F15 - F14 * f2
        G215 = 6 * F229 * g1 + L * F230 * g2
        G311 = f2 * F321 - f1 * F322
        h = 3 * L * m2 * G13 * g1 * g1 - (9 * L * m2 * G13 * G13 + G215 * g1) * th
        A = 20 * g1 * (-3 * L * g1 * (2 * m6 * G13 * G13 + l * G215 * g1) + 2 * m4 * (G13 * G215 + 2 * G311 * g1) * th) / (L * L)
        d = np.empty_like(y)
        d[0] = p1
        d[1] = -k * q1 - L * q1**3
        d[2], d[3], d[4], d[5] = df1, a * f1, df2, a * f2
        d[6], d[7], d[8], d[9] = dg1, b * g1, dg2, b * g2
        d[10] = f1 * g1 * g1 * th
        d[11] = f2 * g1 * g1 * th
        d[12] = g2 * (l * L * g1**3 - 2 * m4 * G13 * g1 * th)
        d[13] = 6 * (2 * m4 * G13 * g1 * g1 * th / L - l * g1**4)
        d[14] = f1 * h
        d[15] = f2 * h
        d[16] = A
        d *= scale
        d[17] = abs(A) * abs(scale)
        return d

    return rhs


def _rhs_k0(P: FrwParams):
    L, l, m2 = P.L, P.l, P.m**2
    m4, m6 = m2 * m2, m2 * m2 * m2
    c = cmath.sqrt(L / 2)

    def rhs(y, scale):
        q1, p1, f1, df1, f2, df2, g1, dg1, g2, dg2 = y[:10]
        F14, F15, F229, F230, F321, F322 = y[10:16]
        sn = c * q1  # sn(t, i) along the homographic solution
        a = -3 * L * q1 * q1
        b = m2 * q1 * q1
        G13 = -f1 * F15 + F14 * f2
        G215 = 6 * F229 * g1 / L + F230 * g2
        G311 = f2 * F321 + f1 * F322
        A = 20 * g1 * (-3 * g1 * (-4 * m6 * G13 * G13 + l * L * G215 * g1) + 4 * m4 * (G13 * G215 + 2 * G311 * g1) * sn) / L
        d = np.empty_like(y)
        d[0] = p1
        d[1] = -L * q1**3
        d[2], d[3], d[4], d[5] = df1, a * f1, df2, a * f2
        d[6], d[7], d[8], d[9] = dg1, b * g1, dg2, b * g2
        d[10] = f1 * g1 * g1 * sn
        d[11] = f2 * g1 * g1 * sn
        d[12] = g2 * (l * L * g1**3 - 4 * m4 * G13 * g1 * sn)
        d[13] = -6 * l * g1**4 + 24 * m4 * G13 * g1 * g1 * sn / L
        d[14] = f1 * (3 * m2 * G13 * g1 * g1 - 18 * m2 * G13 * G13 * sn + G215 * g1 * sn)
        d[15] = f2 * (-3 * m2 * G13 * g1 * g1 + (18 * m2 * G13 * G13 - G215 * g1) * sn)
        d[16] = A
        d *= scale
        d[17] = abs(A) * abs(scale)
        return d

    return rhs


def _run(rhs, ivp, loop: PolygonalPath, cfg, singularities) -> OracleResult:
    drift = [0.0]

    def monitor(y):
        w1 = y[2] * y[5] - y[4] * y[3]
        w2 = y[6] * y[9] - y[8] * y[7]
        d = max(abs(w1 - 1), abs(w2 - 1))
        drift[0] = max(drift[0], d)
        if d > WRONSKIAN_TOL:
            raise WronskianDrift(f"Wronskian drifted by {d:.3g}")

    y0 = _initial_state(ivp[0], ivp[2])
    y, steps = integrate_path(rhs, y0, loop, cfg, singularities, monitor)
    return OracleResult(complex(y[16]), float(y[17].real), steps, drift[0])


def _check_params(P: FrwParams, k: int) -> None:
    if P.k != k:
        raise ValueError(f"this oracle needs curvature k = {k}")
    if P.L == 0:
        raise ValueError("Lambda must be non-zero")


def k436_k1(
    params: FrwParams,
    loops: tuple[PolygonalPath, PolygonalPath] | None = None,
    cfg: IntegratorConfig | None = None,
) -> OracleResult:
    """Obstruction integral along the tanh-type particular solution (curvature 1).

    ``loops`` default to the two hexagons around ``+-i pi/sqrt2``.
    """
    _check_params(params, 1)
    a, b = loops or (hexagon_path(1), hexagon_path(-1))
    sol = sol1(params.L)
    return _run(_rhs_k1(params), sol.ivp, commutator_path(a, b), cfg, sol.poles(50.0))


def k436_k0(
    params: FrwParams,
    loops: tuple[PolygonalPath, PolygonalPath] | None = None,
    cfg: IntegratorConfig | None = None,
) -> OracleResult:
    """Obstruction integral along the homographic elliptic solution (curvature 0).

    ``loops`` default to the spoon loops around ``+-K(1+i)``.
    """
    _check_params(params, 0)
    a, b = loops or (spoon_path(T_STAR_LEMNISCATE, 1), spoon_path(T_STAR_LEMNISCATE, -1))
    sol = sol2(params.L)
    return _run(_rhs_k0(params), sol.ivp, commutator_path(a, b), cfg, sol.poles(50.0))


def eval_f1f2(t: complex, min_pole_distance: float = 1e-3) -> tuple[complex, complex, complex, complex]:
    """Closed-form tangential solutions ``(f1, f2, f1', f2')`` for curvature 1.

    ``f1 = sech^2(t/sqrt2)``, ``f2 = (3 t sech^2(t/sqrt2) + sqrt2 (sinh(sqrt2 t) + 3 tanh(t/sqrt2)))/8``.
    """
    t = complex(t)
    r2 = math.sqrt(2)
    j = round((t.imag * r2 / math.pi - 1) / 2)
    if abs(t - 1j * math.pi * (2 * j + 1) / r2) < min_pole_distance:
        raise ValueError(f"t = {t} is too close to a pole")
    u = t / r2
    sech2 = 1 / cmath.cosh(u) ** 2
    th = cmath.tanh(u)
    f1 = sech2
    df1 = -r2 * sech2 * th
    f2 = (3 * t * sech2 + r2 * (cmath.sinh(r2 * t) + 3 * th)) / 8
    df2 = (3 * sech2 + 3 * t * df1 + r2 * (r2 * cmath.cosh(r2 * t) + 3 * sech2 / r2)) / 8
    return f1, f2, df1, df2
