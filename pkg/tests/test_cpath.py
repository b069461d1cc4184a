import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from varjet.cpath import (
    T_STAR_LEMNISCATE,
    T_STAR_TANH,
    PolygonalPath,
    commutator_path,
    concat,
    format_path,
    hexagon_path,
    inverse,
    min_distance,
    parse_path,
    read_path,
    spoon_path,
    square_path,
    winding_number,
    write_path,
)
from varjet.errors import PathError

coords = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


@given(st.lists(coords, min_size=1, max_size=8))
def test_inverse_involution(vs):
    p = PolygonalPath(tuple(vs))
    assert inverse(inverse(p)).vertices == p.vertices


def test_concat_and_mismatch():
    p = PolygonalPath((0, 1))
    q = PolygonalPath((1, 1j))
    assert concat(p, q).vertices == (0, 1, 1j)
    assert (p * q).vertices == (0, 1, 1j)
    with pytest.raises(PathError):
        concat(q, p * q)


def test_commutator_path_structure():
    a, b = hexagon_path(1), hexagon_path(-1)
    c = commutator_path(a, b)
    assert c.closed and c.start == 0
    assert len(c) == 4 * len(a) - 3
    n = len(a)
    assert c.vertices[:n] == a.vertices
    assert c.vertices[n - 1 : 2 * n - 1] == b.vertices
    assert c.vertices[2 * n - 2 : 3 * n - 2] == inverse(a).vertices
    assert c.vertices[3 * n - 3 :] == inverse(b).vertices
    assert winding_number(c, T_STAR_TANH) == 0


def test_hexagon_geometry():
    h = hexagon_path(1)
    assert h.closed and len(h) == 7
    assert abs(h.vertices[3] - math.sqrt(2) * math.pi * 1j) < 1e-15
    assert winding_number(h, T_STAR_TANH) == 1
    assert winding_number(h, -T_STAR_TANH) == 0
    assert min_distance(h, [T_STAR_TANH]) > 0.5
    assert hexagon_path(-1).vertices == tuple(-v for v in h.vertices)
    with pytest.raises(ValueError):
        hexagon_path(0)


def test_spoon_geometry():
    s = spoon_path(T_STAR_LEMNISCATE, 1)
    t1 = T_STAR_LEMNISCATE - 1 - 1j
    assert s.vertices == (0, t1, t1 + 2, t1 + 2 + 2j, t1 + 2j, t1, 0)
    assert winding_number(s, T_STAR_LEMNISCATE) == 1
    assert winding_number(spoon_path(T_STAR_LEMNISCATE, -1), -T_STAR_LEMNISCATE) == 1
    assert abs(T_STAR_LEMNISCATE - (1.31103 + 1.31103j)) < 1e-5


def test_square_paths():
    sq = square_path()
    assert sq.closed and winding_number(sq, T_STAR_TANH) == 1
    diamond = square_path(vertices=[2 + 2j, 4j, -2 + 2j])
    assert winding_number(diamond, 2.221j) == 1
    assert diamond.vertices == (0, 2 + 2j, 4j, -2 + 2j, 0)


def test_min_distance():
    assert min_distance(PolygonalPath.trivial(0), [0]) == 0
    assert min_distance(PolygonalPath((0, 2)), [1 + 1j]) == 1
    assert min_distance(PolygonalPath((0, 2)), []) == math.inf


def test_winding_requires_closed():
    with pytest.raises(PathError):
        winding_number(PolygonalPath((0, 1)), 5)


def test_path_file_roundtrip(tmp_path):
    h = hexagon_path(1)
    f = tmp_path / "hex.path"
    write_path(h, f)
    back = read_path(f)
    assert back.vertices == h.vertices and back.closed


def test_parse_path_errors():
    assert parse_path("# c\n0 0\n1 0\n0 1\nclosed\n").closed
    with pytest.raises(PathError):
        parse_path("0 0\n1\n")
    with pytest.raises(PathError):
        parse_path("# nothing\n")
    with pytest.raises(PathError):
        parse_path("0 0\nclosed\n1 1\n")
    with pytest.raises(PathError):
        parse_path("0 zero\n")


@given(st.lists(coords, min_size=2, max_size=6))
def test_format_parse_roundtrip(vs):
    p = PolygonalPath(tuple(vs))
    q = parse_path(format_path(p))
    assert q.vertices == p.vertices or (p.closed and q.closed)


def test_length_and_negation():
    p = PolygonalPath((0, 3, 3 + 4j))
    assert p.length() == 7
    assert (-p).vertices == (0, -3, -3 - 4j)
