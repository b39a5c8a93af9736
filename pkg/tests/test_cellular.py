import functools

import pytest

from cubekit.cellular import (
    CellularError,
    abelianization,
    barycentric_subdivision,
    build_cube_complex,
    cellular_homology,
    cube_faces,
    subcube,
    subdivision_counts_per_cell,
)
from cubekit.fixtures import load_builtin
from cubekit.groups import parse_group


@functools.lru_cache(maxsize=None)
def complex_for(name, descending=False):
    p = load_builtin(name)
    cx = build_cube_complex(p, relaxed=name == "torus")
    s = barycentric_subdivision(cx, descending=descending)
    return p, cx, s, cellular_homology(s)


@pytest.mark.parametrize("name,counts", [
    ("gamma357", [1, 9, 26, 24]),
    ("gamma234", [1, 9, 27, 27]),
    ("F2^3", [1, 6, 12, 8]),
    ("torus", [1, 2, 1]),
])
def test_cell_counts(name, counts):
    cx = build_cube_complex(load_builtin(name), relaxed=name == "torus")
    assert cx.counts() == counts


def test_subdivision_counts_per_cell():
    assert [subdivision_counts_per_cell(n) for n in range(4)] == [1, 2, 8, 48]


def test_cube_faces():
    assert len(cube_faces(3)) == 27
    assert len(cube_faces(2)) == 9


@pytest.mark.parametrize("name", ["torus", "F2^3", "gamma357"])
def test_subdivision_is_a_complex_without_loops(name):
    _, cx, s, _ = complex_for(name)
    assert s.check_boundaries() == []
    assert not s.has_loops()
    assert s.euler_characteristic() == cx.euler_characteristic()


def test_torus():
    *_, h = complex_for("torus")
    assert [str(g) for g in h] == ["Z", "Z^2", "Z"]


def test_free_product_cube():
    *_, h = complex_for("F2^3")
    assert [str(g) for g in h] == ["Z", "Z^6", "Z^12", "Z^8"]


def test_gamma357_low_degrees():
    *_, h = complex_for("gamma357")
    assert h[:3] == [parse_group("Z"), parse_group("(Z/2)^2 + (Z/4)^2"), parse_group("(Z/2)^2 + Z/12")]


def test_gamma357_top_degree_forced_by_euler_characteristic():
    _, cx, _, h = complex_for("gamma357")
    assert cx.euler_characteristic() == -6
    assert sum((-1) ** i * g.free_rank for i, g in enumerate(h)) == -6
    assert h[3] == parse_group("Z^7")


@pytest.mark.parametrize("name", ["torus", "F2^3", "gamma357"])
def test_h1_is_abelianization(name):
    p, _, _, h = complex_for(name)
    assert h[1] == abelianization(p)


@pytest.mark.parametrize("name", ["torus", "F2^3"])
def test_orientation_choice_does_not_matter(name):
    assert complex_for(name)[3] == complex_for(name, True)[3]


def test_subcube_of_square_is_edge():
    p = load_builtin("F2^3")
    cx = build_cube_complex(p)
    sq = cx.cells[2][0]
    e = subcube(sq, 0b01, 0b10)
    assert e.n == 1 and e.directions == (sq.directions[0],)


def test_torus_needs_relaxed_flag():
    with pytest.raises(CellularError):
        build_cube_complex(load_builtin("torus"))


def test_dimension_four_unsupported():
    cx = build_cube_complex(load_builtin("F2^4"))
    assert cx.counts() == [1, 8, 24, 32, 16]
    with pytest.raises(CellularError):
        barycentric_subdivision(cx)
