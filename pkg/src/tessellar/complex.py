"""
Arena of oriented 3-simplices whose faces are glued with the trivial face
pairing (face f of one simplex to face f of another), plus a union-find layer
that lets whole simplices be identified after the fact.

Simplices are plain integers. Every public query goes through ``find`` so a
caller may hold stale handles; stored neighbor references are resolved
lazily.
"""
from __future__ import annotations

from array import array
from collections import deque
from itertools import combinations

NONE = -1
EDGES = tuple(combinations(range(4), 2))  # (0,1) (0,2) (0,3) (1,2) (1,3) (2,3)


class ComplexError(Exception):
    pass


class AlreadyGlued(ComplexError):
    pass


class OrientationClash(ComplexError):
    pass


class InconsistentGluing(ComplexError):
    pass


class OpenComplex(ComplexError):
    pass


class NotDivisible(ComplexError):
    pass


class StrayOpenFace(ComplexError):
    pass


def _other_faces(i, j):
    return tuple(f for f in range(4) if f != i and f != j)


class Complex:
    """Oriented 3-simplices with trivial face pairings and identification."""

    def __init__(self, ideal_label: int = 0):
        self.ideal_label = ideal_label
        # typed arrays keep large builds within memory
        self.nb = array("q")  # 4 entries per simplex
        self.orient = array("b")
        self.parent = array("q")
        self.csize = array("q")
        self.tag = array("q")
        self.tag_parent = array("q")
        self.n_classes = 0

    # -- arena ----------------------------------------------------------------

    def __len__(self) -> int:
        return self.n_classes

    @property
    def n_allocated(self) -> int:
        return len(self.parent)

    def new_tag(self) -> int:
        t = len(self.tag_parent)
        self.tag_parent.append(t)
        return t

    def add_simplex(self, orientation: int = 1, tag: int | None = None) -> int:
        if orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        if tag is None:
            tag = self.new_tag()
        s = len(self.parent)
        self.nb.extend((NONE, NONE, NONE, NONE))
        self.orient.append(orientation)
        self.parent.append(s)
        self.csize.append(1)
        self.tag.append(tag)
        self.n_classes += 1
        return s

    def find(self, s: int) -> int:
        parent = self.parent
        while parent[s] != s:
            parent[s] = parent[parent[s]]
            s = parent[s]
        return s

    rep = find

    def find_tag(self, t: int) -> int:
        tp = self.tag_parent
        while tp[t] != t:
            tp[t] = tp[tp[t]]
            t = tp[t]
        return t

    def tag_of(self, s: int) -> int:
        return self.find_tag(self.tag[self.find(s)])

    def orientation(self, s: int) -> int:
        return self.orient[self.find(s)]

    def neighbor(self, s: int, f: int) -> int | None:
        s = self.find(s)
        t = self.nb[4 * s + f]
        if t == NONE:
            return None
        t = self.find(t)
        self.nb[4 * s + f] = t
        return t

    def is_open(self, s: int, f: int) -> bool:
        return self.nb[4 * self.find(s) + f] == NONE

    # -- gluing ---------------------------------------------------------------

    def glue(self, s: int, f: int, t: int) -> None:
        s = self.find(s)
        t = self.find(t)
        if self.nb[4 * s + f] != NONE or self.nb[4 * t + f] != NONE:
            raise AlreadyGlued(f"face {f} of {s} or {t} is already glued")
        if self.orient[s] == self.orient[t]:
            raise OrientationClash(f"cannot glue {s} and {t}: equal orientation")
        self.nb[4 * s + f] = t
        self.nb[4 * t + f] = s

    def identify(self, s: int, t: int, touched: list | None = None) -> int:
        """Merge the classes of s and t and push the merge through all gluings.

        Returns the number of class merges performed. Roots that absorbed a
        class are appended to ``touched`` when given.
        """
        s = self.find(s)
        t = self.find(t)
        if s == t:
            return 0
        if self.orient[s] != self.orient[t]:
            raise OrientationClash(f"cannot identify {s} and {t}: opposite orientation")
        nb = self.nb
        parent = self.parent
        csize = self.csize
        orient = self.orient
        find = self.find
        merges = 0
        stack = [(s, t)]
        while stack:
            x, y = stack.pop()
            x = find(x)
            y = find(y)
            if x == y:
                continue
            if orient[x] != orient[y]:
                raise InconsistentGluing(
                    f"propagation forces identifying {x} and {y} of opposite orientation"
                )
            if csize[x] < csize[y]:
                x, y = y, x
            parent[y] = x
            csize[x] += csize[y]
            merges += 1
            tx, ty = self.find_tag(self.tag[x]), self.find_tag(self.tag[y])
            if tx != ty:
                self.tag_parent[ty] = tx
            if touched is not None:
                touched.append(x)
            bx, by = 4 * x, 4 * y
            for f in range(4):
                ny = nb[by + f]
                if ny == NONE:
                    continue
                nx = nb[bx + f]
                if nx == NONE:
                    nb[bx + f] = ny
                else:
                    stack.append((nx, ny))
        self.n_classes -= merges
        return merges

    def walk(self, s: int, word) -> int | None:
        """Follow faces listed in ``word`` (ints or a digit string) from s."""
        nb = self.nb
        find = self.find
        s = find(s)
        for f in word:
            t = nb[4 * s + int(f)]
            if t == NONE:
                return None
            s = find(t)
        return s

    # -- enumeration ------------------------------------------------------------

    def classes(self) -> list[int]:
        parent = self.parent
        return [s for s in range(len(parent)) if parent[s] == s]

    def open_faces(self, f: int | None = None) -> list[tuple[int, int]]:
        faces = range(4) if f is None else (f,)
        out = []
        nb = self.nb
        for s in self.classes():
            for g in faces:
                if nb[4 * s + g] == NONE:
                    out.append((s, g))
        return out

    def is_closed(self) -> bool:
        nb = self.nb
        return all(nb[4 * s + f] != NONE for s in self.classes() for f in range(4))

    def edge_cycle(self, s: int, i: int, j: int) -> tuple[list[int], bool]:
        """Simplices around the edge (i, j) of s, and whether the cycle closes.

        For an open cycle the list runs from one open end to the other.
        """
        k, l = _other_faces(i, j)
        s = self.find(s)
        seq = [s]
        cur, face = s, k
        while True:
            nxt = self.neighbor(cur, face)
            if nxt is None:
                break
            face = l if face == k else k
            if nxt == s and face == k:
                return seq, True
            seq.append(nxt)
            cur = nxt
        # open: walk the other way from s and prepend
        back = []
        cur, face = s, l
        while True:
            nxt = self.neighbor(cur, face)
            if nxt is None:
                break
            face = l if face == k else k
            back.append(nxt)
            cur = nxt
        back.reverse()
        return back + seq, False

    def audit(self) -> None:
        """Check involution and orientation invariants; raise on violation."""
        for s in self.classes():
            for f in range(4):
                t = self.neighbor(s, f)
                if t is None:
                    continue
                if self.neighbor(t, f) != s:
                    raise InconsistentGluing(f"gluing of {s} at face {f} is not an involution")
                if self.orient[s] == self.orient[t]:
                    raise OrientationClash(f"{s} and {t} glued with equal orientation")
        if self.n_classes != sum(1 for _ in self.classes()):
            raise ComplexError("class counter out of sync")

    def compact(self) -> "Complex":
        """Copy with one simplex per class, numbered by ascending representative."""
        roots = self.classes()
        index = {s: k for k, s in enumerate(roots)}
        out = Complex(self.ideal_label)
        tag_index: dict[int, int] = {}
        for s in roots:
            t = self.find_tag(self.tag[s])
            if t not in tag_index:
                tag_index[t] = out.new_tag()
            out.add_simplex(self.orient[s], tag_index[t])
        for k, s in enumerate(roots):
            for f in range(4):
                t = self.neighbor(s, f)
                if t is not None:
                    out.nb[4 * k + f] = index[t]
        return out

    def neighbor_table(self) -> list[tuple[int, int, int, int]]:
        """Neighbor table of the compacted complex (-1 for open faces)."""
        c = self.compact()
        return [tuple(c.nb[4 * s: 4 * s + 4]) for s in range(len(c))]

    def copy(self) -> "Complex":
        out = Complex(self.ideal_label)
        out.nb = array("q", self.nb)
        out.orient = array("b", self.orient)
        out.parent = array("q", self.parent)
        out.csize = array("q", self.csize)
        out.tag = array("q", self.tag)
        out.tag_parent = array("q", self.tag_parent)
        out.n_classes = self.n_classes
        return out

    @classmethod
    def from_table(cls, orientations, table, ideal_label: int = 0) -> "Complex":
        """Build from per-simplex orientations and neighbor rows (None or -1 = open)."""
        c = cls(ideal_label)
        for o in orientations:
            c.add_simplex(o)
        for s, row in enumerate(table):
            for f, t in enumerate(row):
                if t is not None and t != NONE:
                    c.nb[4 * s + f] = t
        return c


# -- cell classes ------------------------------------------------------------------


class _UF:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, x):
        p = self.p
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x != y:
            self.p[max(x, y)] = min(x, y)


def vertex_classes(c: Complex, label: int) -> dict[int, int]:
    """Map each simplex class to the id of the class of its vertex ``label``."""
    roots = c.classes()
    index = {s: k for k, s in enumerate(roots)}
    uf = _UF(len(roots))
    for s in roots:
        for f in range(4):
            if f == label:
                continue
            t = c.neighbor(s, f)
            if t is not None:
                uf.union(index[s], index[t])
    ids: dict[int, int] = {}
    out = {}
    for s in roots:
        r = uf.find(index[s])
        out[s] = ids.setdefault(r, len(ids))
    return out


def edge_classes(c: Complex, i: int, j: int) -> dict[int, int]:
    """Map each simplex class to the id of the class of its edge (i, j)."""
    roots = c.classes()
    index = {s: k for k, s in enumerate(roots)}
    uf = _UF(len(roots))
    for s in roots:
        for f in _other_faces(i, j):
            t = c.neighbor(s, f)
            if t is not None:
                uf.union(index[s], index[t])
    ids: dict[int, int] = {}
    out = {}
    for s in roots:
        r = uf.find(index[s])
        out[s] = ids.setdefault(r, len(ids))
    return out


def edge_valences(c: Complex) -> dict[tuple[int, int, int], tuple[int, bool]]:
    """Per edge class, keyed by (first simplex, i, j): (simplex count, closed)."""
    out = {}
    for i, j in EDGES:
        seen = set()
        for s in c.classes():
            if s in seen:
                continue
            cyc, closed = c.edge_cycle(s, i, j)
            seen.update(cyc)
            out[(min(cyc), i, j)] = (len(cyc), closed)
    return out


def expected_valences(t) -> dict[tuple[int, int], int]:
    """Edge valence each simplex edge must have in a manifold of type t.

    Edge (2,3) runs from an edge midpoint to a vertex of the dual r-gon: p
    solids meet there, doubled by the subdivision. Edge (0,3) is an ideal ray
    over a dual vertex (q), edge (0,1) over an r-gon centre (r). The remaining
    three are interior to a barycentric 2-cell and always have 4.
    """
    return {
        (0, 1): 2 * t.r,
        (0, 2): 4,
        (0, 3): 2 * t.q,
        (1, 2): 4,
        (1, 3): 4,
        (2, 3): 2 * t.p,
    }


def wrong_valence_edges(c: Complex, t, only_closed: bool = True) -> list[tuple[int, int, int]]:
    exp = expected_valences(t)
    bad = []
    for (s, i, j), (n, closed) in edge_valences(c).items():
        if closed and n != exp[(i, j)]:
            bad.append((s, i, j))
        elif not closed and not only_closed and n > exp[(i, j)]:
            bad.append((s, i, j))
    return bad


def is_manifold(c: Complex, t) -> bool:
    if not c.is_closed():
        raise OpenComplex("is_manifold needs a closed complex")
    return not wrong_valence_edges(c, t)


def cusp_count(c: Complex) -> int:
    cls = vertex_classes(c, c.ideal_label)
    return len(set(cls.values()))


def solid_count(c: Complex, t) -> int:
    n = len(c)
    s = t.simplices_per_solid
    if n % s:
        raise NotDivisible(f"{n} simplices is not a multiple of {s}")
    return n // s


# -- isomorphism -----------------------------------------------------------------


def _perm_sign(perm) -> int:
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def _valence_signature(c: Complex) -> dict[int, tuple]:
    sig = {s: [0] * 6 for s in c.classes()}
    for e, (i, j) in enumerate(EDGES):
        seen = set()
        for s in c.classes():
            if s in seen:
                continue
            cyc, closed = c.edge_cycle(s, i, j)
            seen.update(cyc)
            for x in cyc:
                sig[x][e] = (len(cyc), closed)
    return {s: tuple(v) for s, v in sig.items()}


def _try_extend(c1: Complex, c2: Complex, s1: int, s2: int, label_map, flip: int) -> bool:
    phi = {s1: s2}
    used = {s2}
    queue = deque([s1])
    while queue:
        a = queue.popleft()
        b = phi[a]
        if c1.orient[a] * flip != c2.orient[b]:
            return False
        for f in range(4):
            na = c1.neighbor(a, f)
            nb_ = c2.neighbor(b, label_map[f])
            if (na is None) != (nb_ is None):
                return False
            if na is None:
                continue
            if na in phi:
                if phi[na] != nb_:
                    return False
            else:
                if nb_ in used:
                    return False
                phi[na] = nb_
                used.add(nb_)
                queue.append(na)
    return len(phi) == len(c1)


def are_isomorphic(c1: Complex, c2: Complex, label_map=(0, 1, 2, 3)) -> bool:
    """Whether a face-preserving bijection exists, vertex label f of c1 going to label_map[f] of c2.

    Tries every seed in c2 for one fixed simplex of c1, per connected
    component of c1 (the complexes here are connected).
    """
    label_map = tuple(label_map)
    if len(c1) != len(c2):
        return False
    if len(c1) == 0:
        return True
    flip = _perm_sign(label_map)
    sig1 = _valence_signature(c1)
    sig2 = _valence_signature(c2)

    def translate(sig):
        # signature entry for c1 edge (i,j) must match c2 edge (map i, map j)
        out = [None] * 6
        for e, (i, j) in enumerate(EDGES):
            a, b = sorted((label_map[i], label_map[j]))
            out[EDGES.index((a, b))] = sig[e]
        return tuple(out)

    s1 = c1.classes()[0]
    target = translate(sig1[s1])
    for s2 in c2.classes():
        if sig2[s2] != target:
            continue
        if _try_extend(c1, c2, s1, s2, label_map, flip):
            return True
    return False
