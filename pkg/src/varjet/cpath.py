"""Polygonal complex-time paths, their group operations and the built-in loops."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import PathError

__all__ = [
    "PolygonalPath",
    "inverse",
    "concat",
    "commutator_path",
    "hexagon_path",
    "spoon_path",
    "square_path",
    "min_distance",
    "winding_number",
    "read_path",
    "write_path",
    "format_path",
    "parse_path",
    "T_STAR_TANH",
    "T_STAR_LEMNISCATE",
]

# nearest pole of tanh(t/sqrt2) in the upper half plane
T_STAR_TANH = 1j * math.pi / math.sqrt(2)
# nearest pole of sn(t, i) in the first quadrant: K(m=-1) * (1 + i)
T_STAR_LEMNISCATE = 1.3110287771460599 * (1 + 1j)

_CLOSE_TOL = 1e-12


@dataclass(frozen=True)
class PolygonalPath:
    """Ordered complex vertices; ``vertices[0]`` is the base point."""

    vertices: tuple[complex, ...]
    name: str = ""

    def __post_init__(self):
        verts = tuple(complex(v) for v in self.vertices)
        if not verts:
            raise PathError("a path needs at least one vertex")
        object.__setattr__(self, "vertices", verts)

    @classmethod
    def trivial(cls, base: complex = 0j) -> "PolygonalPath":
        return cls((complex(base),), name="trivial")

    @property
    def start(self) -> complex:
        return self.vertices[0]

    @property
    def end(self) -> complex:
        return self.vertices[-1]

    @property
    def closed(self) -> bool:
        return abs(self.end - self.start) <= _CLOSE_TOL

    def segments(self) -> list[tuple[complex, complex]]:
        v = self.vertices
        return [(v[i], v[i + 1]) for i in range(len(v) - 1) if v[i + 1] != v[i]]

    def length(self) -> float:
        return sum(abs(b - a) for a, b in self.segments())

    def __neg__(self) -> "PolygonalPath":
        return PolygonalPath(tuple(-v for v in self.vertices), name=f"-{self.name}" if self.name else "")

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __mul__(self, other: "PolygonalPath") -> "PolygonalPath":
        """``p * q`` traverses ``p`` first, then ``q``."""
        return concat(self, other)


def inverse(p: PolygonalPath) -> PolygonalPath:
    return PolygonalPath(tuple(reversed(p.vertices)), name=f"{p.name}^-1" if p.name else "")


def concat(p: PolygonalPath, q: PolygonalPath) -> PolygonalPath:
    """Traverse ``p`` then ``q``; ``q`` must start where ``p`` ends."""
    if abs(q.start - p.end) > _CLOSE_TOL:
        raise PathError(f"cannot concatenate: {p.end} != {q.start}")
    name = f"{p.name}.{q.name}" if p.name and q.name else ""
    return PolygonalPath(p.vertices + q.vertices[1:], name=name)


def commutator_path(p: PolygonalPath, q: PolygonalPath) -> PolygonalPath:
    """Loop ``q^-1 p^-1 q p`` in right-to-left notation: ``p``, ``q``, ``p^-1``, ``q^-1``."""
    out = concat(concat(concat(p, q), inverse(p)), inverse(q))
    if p.name and q.name:
        out = PolygonalPath(out.vertices, name=f"[{p.name},{q.name}]")
    return out


def hexagon_path(sign: int = 1) -> PolygonalPath:
    """Hexagonal loop at 0 around ``sign * i*pi/sqrt2`` (counter-clockwise for ``sign=+1``)."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    a = 6 / 5
    top = math.sqrt(2) * math.pi
    verts = [0, a + a * 1j, a + (top - a) * 1j, top * 1j, -a + (top - a) * 1j, -a + a * 1j, 0]
    return PolygonalPath(tuple(sign * complex(v) for v in verts), name="hex+" if sign > 0 else "hex-")


def spoon_path(t_star: complex = T_STAR_LEMNISCATE, sign: int = 1) -> PolygonalPath:
    """``0 -> t1 -> t2 -> t3 -> t4 -> t1 -> 0`` around a side-2 square centred on ``t_star``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    t1 = t_star - 1 - 1j
    t2 = t_star + 1 - 1j
    t3 = t_star + 1 + 1j
    t4 = t_star - 1 + 1j
    verts = [0, t1, t2, t3, t4, t1, 0]
    return PolygonalPath(tuple(sign * complex(v) for v in verts), name="spoon+" if sign > 0 else "spoon-")


def square_path(
    center: complex = T_STAR_TANH,
    half_side: float = 2.0,
    vertices: Sequence[complex] | None = None,
    base: complex = 0j,
) -> PolygonalPath:
    """Square loop based at ``base``.

    With explicit ``vertices`` the loop is ``base -> v1 -> ... -> vn -> base``;
    otherwise the counter-clockwise axis-aligned square of the given half side
    around ``center`` is used, entered and left through its lower-left corner
    (``base`` joins the corner by a straight segment).
    """
    if vertices is not None:
        verts = [base, *vertices, base]
    else:
        h = half_side
        c = complex(center)
        ll = c - h - h * 1j
        verts = [base, ll, c + h - h * 1j, c + h + h * 1j, c - h + h * 1j, ll, base]
    out = []
    for v in verts:
        v = complex(v)
        if not out or out[-1] != v:
            out.append(v)
    return PolygonalPath(tuple(out), name="square")


def _point_segment_distance(z: complex, a: complex, b: complex) -> float:
    d = b - a
    if d == 0:
        return abs(z - a)
    s = ((z - a) * d.conjugate()).real / abs(d) ** 2
    s = min(1.0, max(0.0, s))
    return abs(z - (a + s * d))


def min_distance(p: PolygonalPath, points: Iterable[complex]) -> float:
    """Smallest distance from any point of ``p`` to any of ``points`` (``inf`` if none)."""
    points = list(points)
    if not points:
        return math.inf
    segs = p.segments() or [(p.start, p.start)]
    return min(_point_segment_distance(complex(z), a, b) for z in points for a, b in segs)


def winding_number(p: PolygonalPath, z: complex) -> int:
    """Winding number of a closed path about ``z`` (sum of argument increments)."""
    if not p.closed:
        raise PathError("winding number needs a closed path")
    total = 0.0
    for a, b in p.segments():
        if min(abs(a - z), abs(b - z)) == 0:
            raise PathError("path passes through the point")
        total += cmath.phase((b - z) / (a - z))
    return int(round(total / (2 * math.pi)))


def format_path(p: PolygonalPath) -> str:
    lines = [f"# {p.name}" if p.name else "# path"]
    verts = p.vertices[:-1] if p.closed and len(p) > 1 else p.vertices
    for v in verts:
        lines.append(f"{v.real!r} {v.imag!r}")
    if p.closed and len(p) > 1:
        lines.append("closed")
    return "\n".join(lines) + "\n"


def parse_path(text: str, name: str = "") -> PolygonalPath:
    """Parse ``re im`` vertex lines; ``#`` starts a comment; a ``closed`` line closes the loop."""
    verts: list[complex] = []
    closed = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower() == "closed":
            closed = True
            continue
        if closed:
            raise PathError(f"line {lineno}: vertex after 'closed' footer")
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise PathError(f"line {lineno}: expected 're im', got {raw!r}")
        try:
            verts.append(complex(float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise PathError(f"line {lineno}: {exc}") from None
    if not verts:
        raise PathError("no vertices")
    if closed and verts[-1] != verts[0]:
        verts.append(verts[0])
    return PolygonalPath(tuple(verts), name=name)


def read_path(path: str | Path) -> PolygonalPath:
    path = Path(path)
    return parse_path(path.read_text(encoding="utf-8"), name=path.stem)


def write_path(p: PolygonalPath, path: str | Path) -> None:
    Path(path).write_text(format_path(p), encoding="utf-8")


def as_array(p: PolygonalPath) -> np.ndarray:
    return np.array(p.vertices, dtype=complex)
