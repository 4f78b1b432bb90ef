import random

import pytest
from hypothesis import given, settings, strategies as st

from tessellar.complex import (
    AlreadyGlued,
    Complex,
    InconsistentGluing,
    OpenComplex,
    OrientationClash,
    are_isomorphic,
    cusp_count,
    edge_classes,
    expected_valences,
    is_manifold,
    solid_count,
    NotDivisible,
    vertex_classes,
)
from tessellar.lattice import EISENSTEIN, GAUSS, QuadInt
from tessellar.nanotube import TessType, add_nanotube
from tessellar.universal import build_universal

T336 = TessType(3, 3, 6)


def pair(c, f=0):
    a = c.add_simplex(1)
    b = c.add_simplex(-1)
    c.glue(a, f, b)
    return a, b


def partition(c):
    groups = {}
    for s in range(c.n_allocated):
        groups.setdefault(c.find(s), set()).add(s)
    return {frozenset(g) for g in groups.values()}


def canonical_table(c):
    # neighbors named by the smallest member of their class
    low = {}
    for s in range(c.n_allocated):
        r = c.find(s)
        low[r] = min(low.get(r, s), s)
    return sorted(
        (low[s], tuple(-1 if c.neighbor(s, f) is None else low[c.neighbor(s, f)] for f in range(4)))
        for s in c.classes()
    )


def test_glue_is_symmetric():
    c = Complex()
    a, b = pair(c, 2)
    assert c.neighbor(a, 2) == b
    assert c.neighbor(b, 2) == a
    assert c.is_open(a, 0)
    c.audit()


def test_glue_rejects_equal_orientation():
    c = Complex()
    a, b = c.add_simplex(1), c.add_simplex(1)
    with pytest.raises(OrientationClash):
        c.glue(a, 0, b)


def test_glue_rejects_used_face():
    c = Complex()
    a, b = pair(c)
    d = c.add_simplex(-1)
    with pytest.raises(AlreadyGlued):
        c.glue(a, 0, d)


def test_add_simplex_orientation_checked():
    with pytest.raises(ValueError):
        Complex().add_simplex(0)


def test_identify_propagates_through_gluings():
    c = Complex()
    a, b = pair(c, 0)
    x, y = pair(c, 0)
    assert len(c) == 4
    merges = c.identify(a, x)
    assert merges == 2
    assert len(c) == 2
    assert c.find(b) == c.find(y)
    c.audit()


def test_identify_fills_open_faces():
    c = Complex()
    a, b = pair(c, 0)
    x, y = pair(c, 1)
    c.identify(a, x)
    assert c.neighbor(a, 0) == c.find(b)
    assert c.neighbor(a, 1) == c.find(y)
    assert len(c) == 3
    c.audit()


def test_identify_opposite_orientation_fails():
    c = Complex()
    a, b = pair(c)
    with pytest.raises(OrientationClash):
        c.identify(a, b)


def test_identify_inconsistent_propagation():
    # legal gluings never force a clash, so start from a table with a bad gluing
    c = Complex.from_table([1, 1, 1, -1], [[1, -1, -1, -1], [0, -1, -1, -1],
                                          [3, -1, -1, -1], [2, -1, -1, -1]])
    with pytest.raises(InconsistentGluing):
        c.identify(0, 2)


def test_identify_same_class_is_noop():
    c = Complex()
    a, _ = pair(c)
    assert c.identify(a, a) == 0


def test_walk_and_edge_cycle_on_closed_pair():
    # two simplices glued along all four faces: a closed complex
    c = Complex()
    a, b = c.add_simplex(1), c.add_simplex(-1)
    for f in range(4):
        c.glue(a, f, b)
    assert c.is_closed()
    assert c.walk(a, "0123") == c.find(a)
    cyc, closed = c.edge_cycle(a, 0, 1)
    assert closed and len(cyc) == 2


def test_edge_cycle_open():
    c = Complex()
    a, b = pair(c, 2)
    cyc, closed = c.edge_cycle(a, 0, 1)
    assert not closed
    assert sorted(cyc) == sorted([a, b])


def test_compact_and_table_round_trip():
    c = build_universal(T336, QuadInt(2, 0, EISENSTEIN)).complex
    k = c.compact()
    table = k.neighbor_table()
    again = Complex.from_table(list(k.orient), table)
    assert again.neighbor_table() == table
    assert are_isomorphic(c, again)


def test_copy_is_independent():
    c = Complex()
    a, b = pair(c)
    d = c.copy()
    d.identify(d.add_simplex(1), a)
    assert len(c) == 2
    assert c.n_allocated == 2


@pytest.mark.parametrize("z, cusps", [(QuadInt(2, 0, EISENSTEIN), 5), (QuadInt(2, 1, EISENSTEIN), 8)])
def test_cusps_of_small_manifolds(z, cusps):
    c = build_universal(T336, z).complex
    assert cusp_count(c) == cusps
    assert is_manifold(c, T336)


def test_is_manifold_needs_closed():
    c = Complex()
    pair(c)
    with pytest.raises(OpenComplex):
        is_manifold(c, T336)


def test_solid_count_divisibility():
    c = Complex()
    pair(c)
    with pytest.raises(NotDivisible):
        solid_count(c, T336)


def test_edge_valence_histogram():
    # every edge class of a manifold has exactly its expected valence
    c = build_universal(T336, QuadInt(2, 1, EISENSTEIN)).complex
    exp = expected_valences(T336)
    for (i, j), n in exp.items():
        cls = edge_classes(c, i, j)
        counts = {}
        for k in cls.values():
            counts[k] = counts.get(k, 0) + 1
        assert set(counts.values()) == {n}


def test_vertex_classes_cover_all_simplices():
    c = build_universal(T336, QuadInt(2, 0, EISENSTEIN)).complex
    cls = vertex_classes(c, 0)
    assert set(cls) == set(c.classes())


def test_isomorphism_negative_cases():
    a = build_universal(T336, QuadInt(2, 0, EISENSTEIN)).complex
    b = build_universal(T336, QuadInt(2, 1, EISENSTEIN)).complex
    assert not are_isomorphic(a, b)
    # reversing labels swaps valence 12 edges with valence 6 ones
    assert not are_isomorphic(a, a, label_map=(3, 2, 1, 0))
    assert are_isomorphic(a, a)


def test_isomorphism_survives_renumbering():
    c = build_universal(TessType(3, 4, 4), QuadInt(2, 1, GAUSS)).complex.compact()
    n = len(c)
    perm = list(range(n))
    random.Random(3).shuffle(perm)
    inv = [0] * n
    for i, p in enumerate(perm):
        inv[p] = i
    table = c.neighbor_table()
    orient = [c.orient[inv[k]] for k in range(n)]
    shuffled = [[perm[t] for t in table[inv[k]]] for k in range(n)]
    assert are_isomorphic(c, Complex.from_table(orient, shuffled))


# -- identify confluence -------------------------------------------------------


def _two_tubes():
    c = Complex()
    add_nanotube(c, T336, QuadInt(2, 0, EISENSTEIN))
    add_nanotube(c, T336, QuadInt(2, 0, EISENSTEIN))
    return c


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 95), st.integers(0, 95)), min_size=1, max_size=5),
       st.randoms(use_true_random=False))
def test_identify_confluence(pairs, rnd):
    base = _two_tubes()
    pairs = [(s, t) for s, t in pairs if base.orient[s] == base.orient[t]]
    order = pairs[:]
    rnd.shuffle(order)
    results = []
    for seq in (pairs, order):
        c = base.copy()
        try:
            for s, t in seq:
                c.identify(s, t)
        except (InconsistentGluing, OrientationClash):
            results.append(None)
            continue
        c.audit()
        results.append(c)
    if results[0] is None or results[1] is None:
        # a contradiction is a property of the final partition, not of the order
        assert results[0] is None and results[1] is None
    else:
        # equal partitions imply equal complexes, since gluings follow the classes
        assert partition(results[0]) == partition(results[1])
        assert canonical_table(results[0]) == canonical_table(results[1])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_audit_after_random_operations(seed):
    rng = random.Random(seed)
    c = _two_tubes()
    for _ in range(6):
        op = rng.random()
        pos = [s for s in c.classes() if c.orient[s] > 0]
        neg = [s for s in c.classes() if c.orient[s] < 0]
        if op < 0.5:
            s, t = rng.choice(pos), rng.choice(neg)
            f = rng.randrange(4)
            if c.is_open(s, f) and c.is_open(t, f):
                c.glue(s, f, t)
        else:
            group = pos if rng.random() < 0.5 else neg
            s, t = rng.choice(group), rng.choice(group)
            try:
                c.identify(s, t)
            except (InconsistentGluing, OrientationClash):
                return
        c.audit()
