import pytest

from tessellar.complex import (
    Complex,
    StrayOpenFace,
    edge_classes,
    expected_valences,
    vertex_classes,
)
from tessellar.lattice import EISENSTEIN, GAUSS, QuadInt, norm_sq, torus
from tessellar.nanotube import (
    TYPES,
    TessType,
    add_nanotube,
    index,
    make_nanotube,
    nanotube_size,
    open_rgons,
    rgon_cycle,
)

CASES = [
    (TessType(3, 3, 6), QuadInt(2, 0, EISENSTEIN)),
    (TessType(3, 3, 6), QuadInt(2, 1, EISENSTEIN)),
    (TessType(3, 3, 6), QuadInt(3, 2, EISENSTEIN)),
    (TessType(3, 4, 4), QuadInt(2, 1, GAUSS)),
    (TessType(3, 4, 4), QuadInt(3, 1, GAUSS)),
    (TessType(4, 3, 6), QuadInt(1, 1, EISENSTEIN)),
    (TessType(5, 3, 6), QuadInt(2, 0, EISENSTEIN)),
]


def n_classes(cls):
    return len(set(cls.values()))


@pytest.mark.parametrize(
    "text, expected",
    [("3,3,6", TessType(3, 3, 6)), ("{3,4,4}", TessType(3, 4, 4)), (" 5,3,6 ", TessType(5, 3, 6))],
)
def test_parse_type(text, expected):
    assert TessType.parse(text) == expected


@pytest.mark.parametrize("text", ["3,3", "3,3,5", "a,b,c"])
def test_parse_type_rejects(text):
    with pytest.raises(ValueError):
        TessType.parse(text)


@pytest.mark.parametrize(
    "t, per_solid", [(TessType(3, 3, 6), 24), (TessType(3, 4, 4), 48), (TessType(4, 3, 6), 48),
                     (TessType(5, 3, 6), 120)]
)
def test_simplices_per_solid(t, per_solid):
    # 2p triangles per face times the number of faces
    assert t.simplices_per_solid == per_solid


def test_all_four_types_listed():
    assert {str(t) for t in TYPES} == {"{3,3,6}", "{3,4,4}", "{4,3,6}", "{5,3,6}"}


def test_index_is_a_bijection():
    r, n = 6, 7
    seen = {index(w, k, s, r) for w in range(n) for k in range(r) for s in (0, 1)}
    assert seen == set(range(2 * r * n))


@pytest.mark.parametrize("t, z", CASES)
def test_size_and_open_rgons(t, z):
    c, rgons = make_nanotube(t, z)
    assert len(c) == nanotube_size(t, z) == 2 * t.r * norm_sq(z)
    assert len(rgons) == norm_sq(z)
    assert all(len(g) == 2 * t.r for g in rgons)
    assert sorted(x for g in rgons for x in g) == list(range(len(c)))
    c.audit()


@pytest.mark.parametrize("t, z", CASES)
def test_only_face_zero_is_open(t, z):
    c, _ = make_nanotube(t, z)
    assert {f for _, f in c.open_faces()} == {0}


@pytest.mark.parametrize("t, z", CASES)
def test_link_matches_dual_torus(t, z):
    # the cusp link of a nanotube is T*_z subdivided, built independently in lattice
    c, _ = make_nanotube(t, z)
    tt = torus(z, t.r, dual=True)
    assert n_classes(vertex_classes(c, 0)) == 1
    assert n_classes(edge_classes(c, 0, 1)) == len(tt.faces)
    assert n_classes(edge_classes(c, 0, 2)) == len(tt.edges)
    assert n_classes(edge_classes(c, 0, 3)) == tt.n_vertices


@pytest.mark.parametrize("t, z", CASES)
def test_ideal_edges_have_manifold_valence(t, z):
    # ideal edges are closed inside a nanotube and already have their final valence
    c, _ = make_nanotube(t, z)
    exp = expected_valences(t)
    for s in c.classes():
        for i, j in ((0, 1), (0, 2), (0, 3)):
            cyc, closed = c.edge_cycle(s, i, j)
            assert closed and len(cyc) == exp[(i, j)]


def test_rgon_cycle_walks_faces_three_and_two():
    t, z = CASES[1]
    c, rgons = make_nanotube(t, z)
    g = rgons[0]
    assert rgon_cycle(c, g[0], 2 * t.r) == g
    assert rgon_cycle(c, g[0], 2 * t.r - 2) is None


def test_add_nanotube_appends_fresh_tag():
    t, z = CASES[0]
    c = Complex()
    a = add_nanotube(c, t, z)
    b = add_nanotube(c, t, z)
    assert a == 0 and b == nanotube_size(t, z)
    assert c.tag_of(a) != c.tag_of(b)
    assert len(open_rgons(c, t.r)) == 2 * norm_sq(z)


def test_add_nanotube_rejects_wrong_ring():
    with pytest.raises(ValueError):
        add_nanotube(Complex(), TessType(3, 4, 4), QuadInt(2, 1, EISENSTEIN))


def test_add_nanotube_rejects_zero():
    with pytest.raises(ValueError):
        add_nanotube(Complex(), TessType(3, 3, 6), QuadInt(0, 0, EISENSTEIN))


def test_partly_open_rgon_is_reported():
    t, z = CASES[0]
    c = Complex()
    add_nanotube(c, t, z)
    add_nanotube(c, t, z)
    g = open_rgons(c, t.r)
    c.glue(g[0][0], 0, g[-1][1])
    with pytest.raises(StrayOpenFace):
        open_rgons(c, t.r)
