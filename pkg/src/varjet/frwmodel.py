"""The FRW Hamiltonian family, its particular solutions and the k = 0 classifier.

Hamiltonian (canonical variables ``z = (q1, q2, p1, p2)``)::

    H = (p1^2 + p2^2)/2 + k (q1^2 + q2^2)/2 + L q1^4/4 - m^2 q1^2 q2^2/2 + l q2^4/4

with curvature ``k``, ``L`` the cosmological constant and ``l`` the self-coupling.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import DegenerateDarboux, PoleInFamily
from .jetflow import PolyVectorField

__all__ = [
    "FrwParams",
    "RationalParam",
    "frw_field",
    "hamiltonian",
    "mu",
    "mu1",
    "mu2",
    "mu3",
    "family",
    "ParticularSolution",
    "sol1",
    "sol2",
    "sol2_rational",
    "DarbouxPoint",
    "darboux_points",
    "alpha23",
    "table_membership",
    "expected_monodromy_form",
    "fit_monodromy_form",
    "INTEGRABLE_K0",
    "format_m2",
    "mu_value",
    "Hit",
    "Classification",
    "classify_k0",
]


# --- parameters ---------------------------------------------------------------


@dataclass(frozen=True)
class RationalParam:
    """Exact rational multiple ``coef * m^2``."""

    coef: Fraction
    label: str = ""

    def value(self, m: float = 1.0) -> float:
        return float(self.coef) * m * m

    def __float__(self) -> float:
        return float(self.coef)

    def __str__(self) -> str:
        return format_m2(self.coef)


def format_m2(c: Fraction) -> str:
    """``-8/3 -> '-8m^2/3'``, ``-1 -> '-m^2'``."""
    c = Fraction(c)
    sign = "-" if c < 0 else ""
    num, den = abs(c.numerator), c.denominator
    head = "m^2" if num == 1 else f"{num}m^2"
    if num == 0:
        return "0"
    return f"{sign}{head}" + (f"/{den}" if den != 1 else "")


def _as_fraction(p) -> Fraction:
    if isinstance(p, Fraction):
        return p
    if isinstance(p, float):
        return Fraction(repr(p))
    return Fraction(p)


def _family(name: str, num: int, den: Callable[[Fraction], Fraction], p) -> RationalParam:
    p = _as_fraction(p)
    d = den(p)
    if d == 0:
        raise PoleInFamily(f"{name}({p}) has a vanishing denominator")
    return RationalParam(Fraction(num) / d, f"{name}({p})")


def mu(p) -> RationalParam:
    """``-2 m^2 / ((p+1)(p+2))``: exceptional values for the k != 0 Hamiltonian."""
    return _family("mu", -2, lambda p: (p + 1) * (p + 2), p)


def mu1(p) -> RationalParam:
    return _family("mu1", -72, lambda p: (12 * p + 1) * (12 * p + 7), p)


def mu2(p) -> RationalParam:
    return _family("mu2", -1, lambda p: p * (2 * p - 1), p)


def mu3(p) -> RationalParam:
    return _family("mu3", -8, lambda p: (4 * p + 1) * (4 * p + 3), p)


FAMILIES = {"mu": mu, "mu1": mu1, "mu2": mu2, "mu3": mu3}


def family(name: str) -> Callable[[object], RationalParam]:
    try:
        return FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown family {name!r}; expected one of {sorted(FAMILIES)}") from None


def _num(x, m: float = 1.0) -> complex:
    if isinstance(x, RationalParam):
        return complex(x.value(m))
    if isinstance(x, Fraction):
        return complex(float(x) * m * m)
    return complex(x)


@dataclass(frozen=True)
class FrwParams:
    """Curvature ``k``, cosmological constant ``Lambda``, self-coupling ``lam`` and mass ``m``.

    ``Lambda``/``lam`` given as :class:`RationalParam` (or ``Fraction``) are read
    in units of ``m^2``; plain numbers are absolute.
    """

    k: int = 1
    Lambda: object = -1.0
    lam: object = -1.0
    m: float = 1.0

    def __post_init__(self):
        if self.k not in (-1, 0, 1):
            raise ValueError("curvature k must be -1, 0 or 1")
        if self.m <= 0:
            raise ValueError("mass m must be positive")

    @property
    def L(self) -> complex:
        return _num(self.Lambda, self.m)

    @property
    def l(self) -> complex:
        return _num(self.lam, self.m)


def frw_field(params: FrwParams) -> PolyVectorField:
    """Hamilton's equations: ``q' = p``, ``p1' = -k q1 - L q1^3 + m^2 q1 q2^2``, ``p2'`` alike."""
    k, L, l, m2 = params.k, params.L, params.l, params.m**2
    return PolyVectorField(
        4,
        (
            ((1, (0, 0, 1, 0)),),
            ((1, (0, 0, 0, 1)),),
            ((-k, (1, 0, 0, 0)), (-L, (3, 0, 0, 0)), (m2, (1, 2, 0, 0))),
            ((-k, (0, 1, 0, 0)), (-l, (0, 3, 0, 0)), (m2, (2, 1, 0, 0))),
        ),
    )


def hamiltonian(params: FrwParams, z) -> complex:
    q1, q2, p1, p2 = np.asarray(z, dtype=complex)
    k, L, l, m2 = params.k, params.L, params.l, params.m**2
    return (
        0.5 * (p1**2 + p2**2)
        + 0.5 * k * (q1**2 + q2**2)
        + L * q1**4 / 4
        - 0.5 * m2 * q1**2 * q2**2
        + l * q2**4 / 4
    )


# --- particular solutions -----------------------------------------------------


@dataclass(frozen=True)
class ParticularSolution:
    """Invariant-plane solution: initial condition at ``t = 0``, pole lattice, optional closed form."""

    name: str
    ivp: np.ndarray
    t_star: complex
    energy: complex
    poles: Callable[[float], list[complex]]
    evaluate: Callable[[complex], np.ndarray] | None = None

    def singularities(self, radius: float = 25.0) -> list[complex]:
        return self.poles(radius)


def _nonzero(L, what="Lambda"):
    if L == 0:
        raise ValueError(f"{what} must be non-zero")


def sol1(Lambda) -> ParticularSolution:
    """``phi(t) = (-i tanh(t/sqrt2)/sqrt(L), 0, -i sech^2(t/sqrt2)/sqrt(2L), 0)`` (k = 1).

    Principal square roots throughout; poles at ``i pi (2j+1)/sqrt2``.
    """
    L = _num(Lambda)
    _nonzero(L)
    rL = cmath.sqrt(L)
    r2 = math.sqrt(2)

    def evaluate(t):
        u = complex(t) / r2
        th = cmath.tanh(u)
        sech2 = 1 / cmath.cosh(u) ** 2
        return np.array([-1j * th / rL, 0, -1j * sech2 / (r2 * rL), 0], dtype=complex)

    def poles(radius):
        jmax = int(radius / (math.pi * r2)) + 1
        out = [1j * math.pi * (2 * j + 1) / r2 for j in range(-jmax - 1, jmax + 1)]
        return [z for z in out if abs(z) <= radius]

    return ParticularSolution(
        "sol1", evaluate(0), 1j * math.pi / r2, -1 / (4 * L), poles, evaluate
    )


K_LEMNISCATE = 1.3110287771460599  # K(m = -1) = Gamma(1/4)^2 / (4 sqrt(2 pi))


def _lemniscate_poles(radius):
    K = K_LEMNISCATE
    nmax = int(radius / (2 * K)) + 2
    out = []
    for a in range(-nmax, nmax + 1):
        for b in range(-nmax, nmax + 1):
            z = K * complex(2 * a + 1, 2 * b + 1)
            if abs(z) <= radius:
                out.append(z)
    return sorted(out, key=lambda z: (abs(z), z.real, z.imag))


def sol2(Lambda) -> ParticularSolution:
    """Homographic solution ``sqrt(2/L) (sn(t,i), 0, cn(t,i) dn(t,i), 0)`` (k = 0).

    ``sn(t, i)`` has poles on ``K (odd + odd i)``, ``K = K(m=-1)``; nearest ``+-K(1+i)``.
    """
    L = _num(Lambda)
    _nonzero(L)
    c = cmath.sqrt(2 / L)

    def evaluate(t):
        import mpmath as mp

        t = complex(t)
        sn = complex(mp.ellipfun("sn", t, m=-1))
        cn = complex(mp.ellipfun("cn", t, m=-1))
        dn = complex(mp.ellipfun("dn", t, m=-1))
        return np.array([c * sn, 0, c * cn * dn, 0], dtype=complex)

    return ParticularSolution(
        "sol2", np.array([0, 0, c, 0], dtype=complex), K_LEMNISCATE * (1 + 1j), 1 / L, _lemniscate_poles, evaluate
    )


def sol2_rational(Lambda) -> ParticularSolution:
    """Rational homographic solution built on ``z = i sqrt2 / (t - 1)``."""
    L = _num(Lambda)
    _nonzero(L)
    rL = cmath.sqrt(L)
    r2 = math.sqrt(2)

    def evaluate(t):
        t = complex(t)
        z = 1j * r2 / (t - 1)
        zd = -1j * r2 / (t - 1) ** 2
        return np.array([z / rL, 0, zd / rL, 0], dtype=complex)

    return ParticularSolution("sol2_rational", evaluate(0), 1 + 0j, 0j, lambda r: [1 + 0j], evaluate)


# --- Darboux points -----------------------------------------------------------


@dataclass(frozen=True)
class DarbouxPoint:
    """Solution of ``V4'(c) = c`` stored through its squared coordinates and signs."""

    c1_sq: object
    c2_sq: object
    signs: tuple[int, int]
    alpha: object  # non-trivial Hessian eigenvalue
    family: str

    @property
    def c(self) -> tuple[complex, complex]:
        s1, s2 = self.signs
        return (s1 * cmath.sqrt(complex(self.c1_sq)), s2 * cmath.sqrt(complex(self.c2_sq)))

    def gradient_residual(self, L, l, m2) -> tuple:
        """``V4'(c) - c`` divided by ``c`` componentwise (zero iff Darboux), exact on rationals.

        ``d/dq1 V4 = q1 (L q1^2 - m^2 q2^2)``, so the first component reduces to
        ``L c1^2 - m^2 c2^2 - 1`` whenever ``c1 != 0``.
        """
        r1 = (L * self.c1_sq - m2 * self.c2_sq - 1) if self.c1_sq != 0 else 0
        r2 = (l * self.c2_sq - m2 * self.c1_sq - 1) if self.c2_sq != 0 else 0
        return r1, r2

    def hessian_invariants(self, L, l, m2) -> tuple:
        """Trace and determinant of ``V4''(c)`` (rational in the squared coordinates)."""
        a, b = self.c1_sq, self.c2_sq
        h11 = 3 * L * a - m2 * b
        h22 = 3 * l * b - m2 * a
        det = h11 * h22 - 4 * m2 * m2 * a * b
        return h11 + h22, det


def alpha23(L, l, m2=1):
    """Non-trivial eigenvalue at the mixed Darboux points."""
    den = l * L - m2 * m2
    if den == 0:
        raise DegenerateDarboux("lambda * Lambda == m^4")
    return (3 * l * L + 2 * l * m2 + 2 * L * m2 + m2 * m2) / den


def darboux_points(Lambda, lam, m=1) -> list[DarbouxPoint]:
    """The eight Darboux points of ``V4`` with their non-trivial eigenvalues.

    Rational ``Lambda``, ``lam`` (``Fraction``/``RationalParam`` in units of ``m^2``,
    or ints) give exact results; other numbers are handled in complex floats.
    """
    exact = all(isinstance(x, (Fraction, RationalParam, int)) for x in (Lambda, lam)) and isinstance(m, int)
    if exact:
        L = Lambda.coef if isinstance(Lambda, RationalParam) else Fraction(Lambda)
        l = lam.coef if isinstance(lam, RationalParam) else Fraction(lam)
        m2 = Fraction(m * m)
        L, l = L * m2, l * m2
    else:
        L, l, m2 = _num(Lambda, m), _num(lam, m), complex(m * m)
    if L == 0 or l == 0:
        raise ValueError("Lambda and lambda must be non-zero")
    den = l * L - m2 * m2
    if den == 0:
        raise DegenerateDarboux("lambda * Lambda == m^4: mixed Darboux points do not exist")
    pts = []
    for s in (1, -1):
        pts.append(DarbouxPoint(1 / L, 0 * L, (s, 1), -m2 / L, "q1-axis"))
    a, b = (l + m2) / den, (L + m2) / den
    for s1 in (1, -1):
        for s2 in (1, -1):
            pts.append(DarbouxPoint(a, b, (s1, s2), alpha23(L, l, m2), "mixed"))
    for s in (1, -1):
        pts.append(DarbouxPoint(0 * l, 1 / l, (1, s), -m2 / l, "q2-axis"))
    return pts


# --- Morales-Ramis table ------------------------------------------------------

# quadratics a p^2 + b p + c(alpha) whose integer roots witness membership
_TABLE = {
    "S1": lambda al: (144, 96, 7 - 72 * al),  # (1+12p)(7+12p)/72
    "S2": lambda al: (2, -1, -al),  # p(2p-1)
    "S3": lambda al: (16, 16, 3 - 8 * al),  # (1+4p)(3+4p)/8
}


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def table_membership(alpha) -> dict[str, list[int]]:
    """Sets among S1, S2, S3 containing ``alpha``, each with its integer witnesses."""
    return {k: list(v) for k, v in _membership(Fraction(alpha)).items()}


@lru_cache(maxsize=4096)
def _membership(alpha: Fraction) -> dict[str, tuple[int, ...]]:
    out = {}
    for name, quad in _TABLE.items():
        a, b, c = (Fraction(x) for x in quad(alpha))
        s = _rational_sqrt(b * b - 4 * a * c)
        if s is None:
            continue
        roots = sorted({(-b + s) / (2 * a), (-b - s) / (2 * a)})
        wit = [int(r) for r in roots if r.denominator == 1]
        if wit:
            out[name] = tuple(wit)
    return out


# reference list of k = 0 pairs (units of m^2) with known first integrals
INTEGRABLE_K0 = (
    (Fraction(-1), Fraction(-1)),
    (Fraction(-1, 3), Fraction(-1, 3)),
    (Fraction(-1, 3), Fraction(-8, 3)),
    (Fraction(-1, 6), Fraction(-8, 3)),
)


# --- first-order monodromy templates (k = 0, homographic solution) -------------


def expected_monodromy_form(fam: str, sign: int = 1, a: float = 1.0) -> np.ndarray:
    """Template of the first-order monodromy around ``sign * t*`` for ``Lambda = fam(p)``.

    Coordinates ``(q1, q2, p1, p2)``; the ``mu1`` template has the free real
    parameter ``a``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    M = np.eye(4, dtype=complex)
    if fam == "mu2":
        return M
    if fam == "mu3":
        return np.diag([1, -1, 1, -1]).astype(complex)
    if fam == "mu1":
        off = sign * a * (1 - 1j)
        M[1, 1] = 0.5 - 0.5j
        M[3, 3] = 0.5 + 0.5j
        M[1, 3] = off
        M[3, 1] = -1 / (2 * off)
        return M
    raise ValueError(f"no monodromy template for family {fam!r}")


def fit_monodromy_form(M, fam: str, sign: int = 1) -> tuple[float, float]:
    """Fit the template to ``M``; returns ``(a, sup-norm residual)``.

    For ``mu1`` the real ``a`` is the real projection of ``M[1,3] / (sign (1-i))``.
    """
    M = np.asarray(M, dtype=complex)
    if fam == "mu1":
        a = float((M[1, 3] / (sign * (1 - 1j))).real)
        if a == 0:
            return 0.0, float("inf")
    else:
        a = 1.0
    T = expected_monodromy_form(fam, sign, a)
    return a, float(np.max(np.abs(M - T)))


# --- k = 0 classification -----------------------------------------------------

_FAMILY_INDEX = {1: "mu1", 2: "mu2", 3: "mu3"}


@dataclass(frozen=True)
class Hit:
    """``R_{i,j}(p, q) = alpha23(mu_i(p), mu_j(q))`` lying in a table set."""

    i: int
    j: int
    p: int
    q: int
    alpha: Fraction
    sets: tuple[str, ...]
    witness: tuple[int, ...]
    note: str = ""

    @property
    def pair(self) -> tuple[Fraction, Fraction]:
        return mu_value(self.i, self.p), mu_value(self.j, self.q)


@lru_cache(maxsize=None)
def mu_value(i: int, p: int) -> Fraction:
    return FAMILIES[_FAMILY_INDEX[i]](p).coef


def _alpha23_limit(i: int, j: int, p0: int, q0: int) -> tuple[Fraction, str]:
    """Value of ``R_{i,j}`` at a point where ``lambda Lambda = m^4``, as a limit along both axes."""
    import sympy as sy

    s = sy.Symbol("s")
    fam = {
        1: lambda x: -72 / ((12 * x + 1) * (12 * x + 7)),
        2: lambda x: -1 / (x * (2 * x - 1)),
        3: lambda x: -8 / ((4 * x + 1) * (4 * x + 3)),
    }

    def R(L, l):
        return (3 * l * L + 2 * l + 2 * L + 1) / (l * L - 1)

    along_p = sy.limit(sy.cancel(R(fam[i](p0 + s), fam[j](sy.Integer(q0)))), s, 0)
    along_q = sy.limit(sy.cancel(R(fam[i](sy.Integer(p0)), fam[j](q0 + s))), s, 0)
    if along_p != along_q or not along_p.is_rational:
        raise DegenerateDarboux(f"R_{{{i},{j}}}({p0},{q0}) has no direction-independent limit")
    return Fraction(int(along_p.p), int(along_p.q)), "limit"


def _r_value(i: int, j: int, p: int, q: int) -> tuple[Fraction, str] | None:
    try:
        L, l = mu_value(i, p), mu_value(j, q)
    except PoleInFamily:
        return None
    if L * l == 1:
        return _alpha23_limit(i, j, p, q)
    return alpha23(L, l), ""


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _fmt_pair(pair) -> str:
    return f"({format_m2(pair[0])}, {format_m2(pair[1])})"


@dataclass
class Classification:
    """Outcome of the ``alpha23`` sweep over the mu-family grid."""

    p_range: tuple[int, int]
    q_range: tuple[int, int]
    hits: list[Hit]
    findings: list[str]
    integrable: list[tuple[Fraction, Fraction]]
    open_pairs: list[tuple[Fraction, Fraction]]
    open_families: list[tuple[Fraction, str, tuple[int, ...]]]

    def report(self) -> str:
        (p0, p1), (q0, q1) = self.p_range, self.q_range
        out = [f"# alpha23 sweep over mu_i(p), mu_j(q), i <= j, p in [{p0}, {p1}], q in [{q0}, {q1}]", "[findings]"]
        out += self.findings
        out.append("[integrable]")
        out += [_fmt_pair(pr) for pr in self.integrable]
        out.append("[open]")
        out += [_fmt_pair(pr) for pr in self.open_pairs]
        for const, fam, excl in self.open_families:
            dom = "p in Z" + (" \\ {" + ", ".join(map(str, excl)) + "}" if excl else "")
            out.append(f"({format_m2(const)}, {fam}(p)), {dom}")
        out.append("[hits]")
        out.append("i,j,p,q,alpha,set,witness,note")
        for h in self.hits:
            out.append(
                f"{h.i},{h.j},{h.p},{h.q},{_fmt(h.alpha)},{'|'.join(h.sets)},"
                f"{'|'.join(map(str, h.witness))},{h.note}"
            )
        return "\n".join(out) + "\n"


def classify_k0(p_range: tuple[int, int] = (-50, 50), q_range: tuple[int, int] | None = None) -> Classification:
    """Exact sweep of ``alpha23`` over ``Lambda = mu_i(p)``, ``lambda = mu_j(q)``.

    Pairs with ``i > j`` follow by exchanging ``Lambda`` and ``lambda``.  Hits
    constant along a whole row or column of the grid are reported as families,
    the rest as isolated parameter pairs; candidate ``(Lambda, lambda)`` pairs
    are split into the known-integrable catalogue and the open remainder.
    """
    q_range = q_range or p_range
    ps = range(p_range[0], p_range[1] + 1)
    qs = range(q_range[0], q_range[1] + 1)
    hits: list[Hit] = []
    grid: dict[tuple[int, int], dict[tuple[int, int], Hit]] = {}
    defined: dict[tuple[int, int], set[tuple[int, int]]] = {}
    for i in (1, 2, 3):
        for j in range(i, 4):
            g, dom = {}, set()
            for p in ps:
                for q in qs:
                    v = _r_value(i, j, p, q)
                    if v is None:
                        continue
                    dom.add((p, q))
                    alpha, note = v
                    memb = _membership(alpha)
                    if memb:
                        names = tuple(sorted(memb))
                        wit = tuple(w for n_ in names for w in memb[n_])
                        h = Hit(i, j, p, q, alpha, names, wit, note)
                        g[(p, q)] = h
                        hits.append(h)
            grid[(i, j)], defined[(i, j)] = g, dom

    findings: list[str] = []
    families: list[tuple[Fraction, str]] = []  # (constant parameter, family of the free one)
    isolated: list[tuple[int, int, list[Hit]]] = []
    for (i, j), g in grid.items():
        dom = defined[(i, j)]
        rows = [q for q in qs if all((p, q) in g for p in ps if (p, q) in dom)]
        cols = [p for p in ps if all((p, q) in g for q in qs if (p, q) in dom)]
        rows = [q for q in rows if len({g[(p, q)].alpha for p in ps if (p, q) in g}) == 1]
        cols = [p for p in cols if len({g[(p, q)].alpha for q in qs if (p, q) in g}) == 1]
        covered = {pq for pq in g if pq[1] in rows or pq[0] in cols}
        parts = []
        for q in rows:
            h = next(g[(p, q)] for p in ps if (p, q) in g)
            parts.append((f"R_{{{i},{j}}}(p,{q})", h))
            families.append((mu_value(j, q), _FAMILY_INDEX[i]))
        for p in cols:
            h = next(g[(p, q)] for q in qs if (p, q) in g)
            parts.append((f"R_{{{i},{j}}}({p},q)", h))
            families.append((mu_value(i, p), _FAMILY_INDEX[j]))
        by_value: dict[Fraction, list] = {}
        for name, h in parts:
            by_value.setdefault(h.alpha, []).append((name, h))
        for alpha, items in by_value.items():
            free = ", ".join(sorted({"p" if "(p," in n_ else "q" for n_, _ in items}))
            h = items[0][1]
            findings.append(
                " = ".join(n_ for n_, _ in items) + f" = {_fmt(alpha)} in {'|'.join(h.sets)} for every {free}"
            )
        groups: dict[tuple, list[Hit]] = {}
        for pq in sorted(set(g) - covered):
            h = g[pq]
            groups.setdefault((h.pair, h.alpha), []).append(h)
        for (pair, alpha), hs in groups.items():
            findings.append(
                " = ".join(f"R_{{{i},{j}}}({h.p},{h.q})" for h in hs) + f" = {_fmt(alpha)} in {'|'.join(hs[0].sets)}"
            )
            isolated.append((i, j, hs))

    catalogue = {(_pair_key(pr)): pr for pr in INTEGRABLE_K0}
    integrable: set[tuple[Fraction, Fraction]] = set()
    open_pairs: list[tuple[Fraction, Fraction]] = []
    for _, _, hs in isolated:
        pr = hs[0].pair
        key = (_pair_key(pr))
        if key in catalogue:
            integrable.add(catalogue[key])
        elif all((_pair_key(o)) != key for o in open_pairs):
            open_pairs.append(pr)
    open_families = []
    seen_fam = set()
    for const, fam in families:
        if (const, fam) in seen_fam:
            continue
        seen_fam.add((const, fam))
        excl = []
        for p in ps:
            try:
                v = FAMILIES[fam](p).coef
            except PoleInFamily:
                continue
            key = (_pair_key((const, v)))
            if key in catalogue:
                integrable.add(catalogue[key])
                excl.append(p)
        open_families.append((const, fam, tuple(excl)))
    open_families.sort(key=lambda t: (t[0], t[1]))
    return Classification(
        p_range,
        q_range,
        hits,
        findings,
        [pr for pr in INTEGRABLE_K0 if pr in integrable],
        open_pairs,
        open_families,
    )


def _pair_key(pr) -> tuple:
    """Order-free key for a parameter pair."""
    return tuple(sorted(pr))
