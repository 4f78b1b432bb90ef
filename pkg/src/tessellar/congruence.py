"""
Principal congruence manifolds and orbifolds for D = -3 and D = -4.

Positively oriented simplices are labelled by the matrix carrying a base
simplex to them, kept as (unit exponent of the determinant, entries mod z).
Simplices whose labels agree up to the variant's scalars are identified.
Labelling is interleaved with the universal construction: after every
iteration new simplices are labelled and equal labels identified, so the
complex never grows much beyond the congruence quotient.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum

from .complex import Complex, ComplexError
from .lattice import Kind, QuadInt, ResidueRing, canonicalize
from .nanotube import TessType
from .universal import (
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_MAX_SIMPLICES,
    ConstructionState,
    Status,
    close,
    initial_state,
    step,
)


class Variant(Enum):
    PSLBAR = "pslbar"
    PSL = "psl"
    PGL = "pgl"


class LabelConflict(ComplexError):
    pass


Matrix = tuple  # (a, b, c, d) row-major


def generators(kind: Kind) -> tuple[Matrix, Matrix, Matrix]:
    """Exact g_P, g_Q, g_R over Z[u]."""
    one = QuadInt(1, 0, kind)
    zero = QuadInt(0, 0, kind)
    u = QuadInt(0, 1, kind)
    minus_inv_u = -QuadInt.unit(-1, kind)
    g_p = (zero, one, -one, one)
    g_q = (minus_inv_u, one, zero, one)
    g_r = (u, zero, zero, one)
    return g_p, g_q, g_r


def mat_mul(x: Matrix, y: Matrix) -> Matrix:
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def mat_det(x: Matrix):
    a, b, c, d = x
    return a * d - b * c


def mat_inv(x: Matrix) -> Matrix:
    """Inverse of a matrix whose determinant is a unit."""
    a, b, c, d = x
    di = mat_det(x).inverse()
    return (d * di, -b * di, -c * di, a * di)


# moves from a positive simplex T: (face word, generator indices into (P, Q, R))
MOVES = (
    ((0, 1), (0,)),
    ((1, 2), (1,)),
    ((2, 3), (2,)),
    ((0, 2), (0, 1)),
    ((1, 3), (1, 2)),
    ((0, 3), (0, 1, 2)),
)


@dataclass(frozen=True)
class MatLabel:
    det: int  # 0 for determinant 1, 1 for determinant u
    entries: tuple[int, int, int, int]  # residue indices


class LabelRing:
    """Matrix arithmetic mod z with the determinant tracked exactly as a unit exponent."""

    def __init__(self, z: QuadInt, variant: Variant):
        self.z = canonicalize(z)
        self.kind = z.kind
        self.order = self.kind.unit_order
        self.variant = variant
        ring = ResidueRing(self.z)
        self.ring = ring
        n = ring.n
        self.mul = [[ring.mul(x, y) for y in range(n)] for x in range(n)]
        self.add = [[ring.add(x, y) for y in range(n)] for x in range(n)]
        self.unit_res = [ring.of(QuadInt.unit(k, self.kind)) for k in range(self.order)]
        if variant is Variant.PSLBAR:
            self.scalars = sorted({ring.one, ring.neg(ring.one)})
        else:
            self.scalars = ring.units()
        gens = generators(self.kind)
        self.moves = []
        for faces, idx in MOVES:
            m = (QuadInt(1, 0, self.kind), QuadInt(0, 0, self.kind),
                 QuadInt(0, 0, self.kind), QuadInt(1, 0, self.kind))
            for i in idx:
                m = mat_mul(m, gens[i])
            fwd = self._exact(m)
            back = self._exact(mat_inv(m))
            self.moves.append((faces, fwd, tuple(reversed(faces)), back))

    def _exact(self, m: Matrix):
        det = mat_det(m)
        return tuple(self.ring.of(x) for x in m), det.unit_exponent()

    def identity(self) -> MatLabel:
        o, z = self.ring.one, self.ring.zero
        return MatLabel(0, (o, z, z, o))

    def times(self, g: MatLabel, h) -> MatLabel:
        (e, f, gg, hh), dh = h
        a, b, c, d = g.entries
        mul, add = self.mul, self.add
        ent = (
            add[mul[a][e]][mul[b][gg]],
            add[mul[a][f]][mul[b][hh]],
            add[mul[c][e]][mul[d][gg]],
            add[mul[c][f]][mul[d][hh]],
        )
        det = g.det + dh
        k = 0
        while (det + 2 * k) % self.order not in (0, 1):
            k += 1
        if k:
            s = self.unit_res[k]
            ent = tuple(mul[s][x] for x in ent)
        return MatLabel((det + 2 * k) % self.order, ent)

    def key(self, g: MatLabel):
        mul = self.mul
        ent = min(tuple(mul[s][x] for x in g.entries) for s in self.scalars)
        if self.variant is Variant.PGL:
            return ent
        return (g.det, ent)

    def is_equivalent(self, g: MatLabel, h: MatLabel) -> bool:
        return self.key(g) == self.key(h)


def label_walk(c: Complex, base: int, lr: LabelRing) -> dict[int, MatLabel]:
    """Breadth-first labels of every positive class reachable from base.

    Raises LabelConflict when two paths give inequivalent labels.
    """
    base = c.find(base)
    if c.orient[base] < 0:
        raise ValueError("the base simplex must be positively oriented")
    labels = {base: lr.identity()}
    queue = deque([base])
    while queue:
        s = queue.popleft()
        g = labels[s]
        for fwd_faces, fwd, back_faces, back in lr.moves:
            for faces, m in ((fwd_faces, fwd), (back_faces, back)):
                t = c.walk(s, faces)
                if t is None:
                    continue
                h = lr.times(g, m)
                old = labels.get(t)
                if old is None:
                    labels[t] = h
                    queue.append(t)
                elif old != h and lr.key(old) != lr.key(h):
                    raise LabelConflict(f"simplex {t} reached with two different labels")
    return labels


def _identify_equal_labels(c: Complex, base: int, lr: LabelRing) -> int:
    labels = label_walk(c, base, lr)
    first: dict = {}
    pairs = []
    for s in sorted(labels):
        k = lr.key(labels[s])
        if k in first:
            pairs.append((first[k], s))
        else:
            first[k] = s
    merges = 0
    for s, t in pairs:
        merges += c.identify(s, t)
    return merges


def build_congruence(t: TessType, z: QuadInt, variant: Variant | str,
                     max_simplices=DEFAULT_MAX_SIMPLICES,
                     max_iterations=DEFAULT_MAX_ITERATIONS) -> ConstructionState:
    """Grow the universal construction, identifying equal labels after every iteration.

    The result is Finished once closed, even if it is an orbifold; check
    is_manifold separately.
    """
    if (t.p, t.q, t.r) not in ((3, 3, 6), (3, 4, 4)):
        raise ValueError(f"no congruence construction for {t}")
    variant = Variant(variant) if isinstance(variant, str) else variant
    lr = LabelRing(z, variant)
    state = initial_state(t, z, max_simplices, max_iterations)
    state.status = Status.IN_PROGRESS
    state.detect_orbifold = False
    c = state.complex
    base = 0

    def settle(st, first_new=None):
        while _identify_equal_labels(c, base, lr):
            close(c, t.p, t.r)
        st.growth[-1] = len(c) - (st.sizes[-2] if len(st.sizes) > 1 else 0)
        st.sizes[-1] = len(c)
        if c.is_closed():
            st.status = Status.FINISHED

    settle(state)
    state.after_step = settle
    while state.status is Status.IN_PROGRESS:
        step(state)
    return state
