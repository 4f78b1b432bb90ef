import pytest

from tessellar.complex import are_isomorphic, cusp_count, is_manifold
from tessellar.congruence import (
    MOVES,
    LabelRing,
    Variant,
    build_congruence,
    generators,
    label_walk,
    mat_det,
    mat_inv,
    mat_mul,
)
from tessellar.lattice import EISENSTEIN, GAUSS, Kind, QuadInt
from tessellar.nanotube import TessType
from tessellar.universal import Status, build_universal

T336 = TessType(3, 3, 6)
T344 = TessType(3, 4, 4)


def E(a, b=0):
    return QuadInt(a, b, EISENSTEIN)


def G(a, b=0):
    return QuadInt(a, b, GAUSS)


def ident(kind):
    one, zero = QuadInt(1, 0, kind), QuadInt(0, 0, kind)
    return (one, zero, zero, one)


def power(m, n):
    out = ident(m[0].kind)
    for _ in range(n):
        out = mat_mul(out, m)
    return out


def scalar(m, kind):
    # m is a scalar matrix: return the scalar, else None
    a, b, c, d = m
    zero = QuadInt(0, 0, kind)
    return a if b == zero and c == zero and a == d else None


@pytest.mark.parametrize("kind, r", [(Kind.EISENSTEIN, 6), (Kind.GAUSS, 4)])
def test_generator_relations_up_to_scalars(kind, r):
    # the Coxeter-type relations hold projectively
    gp, gq, gr = generators(kind)
    q = 3 if kind is Kind.EISENSTEIN else 4
    for m, n in [(gp, 3), (gq, q), (gr, r), (mat_mul(gp, gq), 2), (mat_mul(gq, gr), 2),
                 (mat_mul(mat_mul(gp, gq), gr), 2)]:
        assert scalar(power(m, n), kind) is not None


def test_gp_cubed_is_minus_identity():
    gp, _, _ = generators(Kind.EISENSTEIN)
    minus = QuadInt(-1, 0, EISENSTEIN)
    assert scalar(power(gp, 3), Kind.EISENSTEIN) == minus


@pytest.mark.parametrize("kind", [Kind.EISENSTEIN, Kind.GAUSS])
def test_inverse(kind):
    for g in generators(kind):
        assert mat_mul(g, mat_inv(g)) == ident(kind)
        assert mat_det(g).unit_exponent() is not None


def test_move_table():
    assert [faces for faces, _ in MOVES] == [(0, 1), (1, 2), (2, 3), (0, 2), (1, 3), (0, 3)]


@pytest.mark.parametrize("variant", list(Variant))
def test_label_ring_identity_and_keys(variant):
    lr = LabelRing(E(2, 1), variant)
    one = lr.identity()
    for fwd_faces, fwd, back_faces, back in lr.moves:
        g = lr.times(lr.times(one, fwd), back)
        assert lr.is_equivalent(g, one)


def test_pgl_forgets_the_determinant():
    lr_psl = LabelRing(E(2), Variant.PSL)
    lr_pgl = LabelRing(E(2), Variant.PGL)
    g = lr_psl.times(lr_psl.identity(), lr_psl.moves[2][1])
    assert g.det == 1
    assert lr_pgl.key(g) != lr_pgl.key(lr_pgl.identity())
    assert len(lr_psl.key(g)) == 2 and len(lr_pgl.key(g)) == 4


def test_label_walk_on_the_congruence_manifold():
    st = build_congruence(T336, E(2), Variant.PSL)
    c = st.complex
    base = min(s for s in c.classes() if c.orient[s] > 0)
    lr = LabelRing(E(2), Variant.PSL)
    labels = label_walk(c, base, lr)
    assert len(labels) == len(c) // 2
    keys = {lr.key(g) for g in labels.values()}
    assert len(keys) == len(labels)


def test_label_walk_requires_positive_base():
    st = build_congruence(T336, E(2), Variant.PSL)
    c = st.complex
    neg = next(s for s in c.classes() if c.orient[s] < 0)
    with pytest.raises(ValueError):
        label_walk(c, neg, LabelRing(E(2), Variant.PSL))


@pytest.mark.parametrize(
    "variant, simplices, manifold",
    [(Variant.PSL, 240, True), (Variant.PSLBAR, 240, True), (Variant.PGL, 120, False)],
)
def test_eisenstein_two(variant, simplices, manifold):
    st = build_congruence(T336, E(2), variant)
    assert st.status is Status.FINISHED
    assert len(st.complex) == simplices
    assert is_manifold(st.complex, T336) is manifold
    st.complex.audit()


def test_psl_two_is_the_universal_tessellation():
    a = build_congruence(T336, E(2), Variant.PSL).complex
    b = build_universal(T336, E(2)).complex
    assert are_isomorphic(a, b)
    assert cusp_count(a) == 5


def test_pslbar_two_plus_zeta():
    st = build_congruence(T336, E(2, 1), Variant.PSLBAR)
    assert len(st.complex) == 672
    assert cusp_count(st.complex) == 8
    assert are_isomorphic(st.complex, build_universal(T336, E(2, 1)).complex)


@pytest.mark.parametrize("variant", [Variant.PSL, Variant.PSLBAR])
def test_gauss_three_variants_agree(variant):
    # only +1 and -1 square to 1 modulo 3, so the two variants coincide
    st = build_congruence(T344, G(3), variant)
    assert len(st.complex) == 1440
    assert is_manifold(st.complex, T344)


def test_pgl_gauss_three_is_a_double_quotient():
    psl = build_congruence(T344, G(3), Variant.PSL)
    pgl = build_congruence(T344, G(3), Variant.PGL)
    assert len(psl.complex) == 2 * len(pgl.complex)


def test_non_arithmetic_type_rejected():
    with pytest.raises(ValueError):
        build_congruence(TessType(5, 3, 6), E(2), Variant.PSL)


def test_variant_from_string():
    st = build_congruence(T336, E(2), "psl")
    assert len(st.complex) == 240
