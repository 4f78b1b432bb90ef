"""
Iterative construction of the universal regular tessellation N^{p,q,r}_z.

Each step attaches a fresh nanotube to every open r-gon and then closes up
edges that have collected p solids: around every simplex T,
``T_{1010...10}`` (p pairs) is identified with T, and ``T_{1 01...01}`` is
glued to T along face 0 when both are open.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from .complex import (
    NONE,
    Complex,
    ComplexError,
    InconsistentGluing,
    OpenComplex,
    OrientationClash,
    StrayOpenFace,
    cusp_count,
    edge_valences,
    expected_valences,
    is_manifold,
    solid_count,
    vertex_classes,
)
from .lattice import QuadInt, canonicalize, norm_sq
from .nanotube import TessType, add_nanotube, nanotube_size, open_rgons

DEFAULT_MAX_SIMPLICES = 8_000_000
DEFAULT_MAX_ITERATIONS = 64


class Status(Enum):
    IN_PROGRESS = "InProgress"
    FINISHED = "Finished"
    BUDGET_EXCEEDED = "BudgetExceeded"
    ORBIFOLD = "OrbifoldDetected"


class NotFreeAction(ComplexError):
    pass


@dataclass
class ConstructionState:
    t: TessType
    z: QuadInt
    complex: Complex
    iteration: int = 0
    # simplices added per iteration (the first entry is the seed nanotube)
    growth: list = field(default_factory=list)
    # total simplices after each iteration
    sizes: list = field(default_factory=list)
    status: Status = Status.IN_PROGRESS
    max_simplices: int = DEFAULT_MAX_SIMPLICES
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    reason: str = ""
    # per-step hook, used by the congruence labeling
    after_step: object = None
    detect_orbifold: bool = True

    @property
    def finished(self) -> bool:
        return self.status is Status.FINISHED

    def solids(self) -> int:
        return solid_count(self.complex, self.t)

    def cusps(self) -> int:
        return cusp_count(self.complex)


# -- attaching and closing -------------------------------------------------------------


def attach(c: Complex, t: TessType, z: QuadInt, rgon: list[int]) -> int:
    """Glue a fresh nanotube onto one open r-gon; returns the new nanotube's first simplex.

    A folded r-gon (fewer than 2r triangles) is wrapped around repeatedly and
    the new nanotube's extra triangles are identified accordingly.
    """
    base = add_nanotube(c, t, z)
    a = rgon[0]
    # simplex (0,0,0) is positive, (0,0,1) negative
    b = base if c.orient[a] < 0 else base + 1
    n = len(rgon)
    for i in range(2 * t.r):
        if i:
            b = c.neighbor(b, 3 if i % 2 == 1 else 2)
        a = c.find(rgon[i % n])
        if c.is_open(a, 0) and c.is_open(b, 0):
            c.glue(a, 0, b)
        else:
            na = c.neighbor(a, 0)
            if na != c.find(b):
                c.identify(na, b)
    return base


def _cycle_members(c: Complex, s: int, p: int) -> list[int]:
    """Simplices within one full turn of s around its (2,3)-edge."""
    out = [s]
    for first in (0, 1):
        cur, f = s, first
        for _ in range(2 * p):
            cur = c.neighbor(cur, f)
            if cur is None:
                break
            out.append(cur)
            f = 1 - f
    return out


class IdentificationNeeded(ComplexError):
    pass


def close(c: Complex, p: int, r: int, seeds=None, allow_identify: bool = True) -> int:
    """Run the closing rule to a fixpoint; returns the number of events.

    ``seeds`` limits the initial worklist; by default every class is checked.
    With ``allow_identify`` false, a needed identification raises
    IdentificationNeeded instead.
    """
    ident_word = [1, 0] * p
    nb = c.nb
    find = c.find
    work = deque(c.classes() if seeds is None else seeds)
    queued = set(work)
    events = 0
    while work:
        s = work.popleft()
        queued.discard(s)
        s = find(s)
        # follow 1,0,1,0,... from s
        cur = s
        steps = 0
        for f in ident_word:
            nxt = nb[4 * cur + f]
            if nxt == NONE:
                break
            cur = find(nxt)
            steps += 1
        if steps == 2 * p:
            if cur != s:
                if not allow_identify:
                    raise IdentificationNeeded(f"{s} and {cur} would have to be identified")
                touched = _identify_tracked(c, s, cur)
                events += 1
                for x in touched:
                    for y in _cycle_members(c, x, p):
                        if y not in queued:
                            queued.add(y)
                            work.append(y)
            continue
        if steps == 2 * p - 1 and nb[4 * s] == NONE:
            # cur = T_{1 01...01}, whose face 0 is open too
            if cur == s:
                continue
            touched = _glue_rgons(c, s, cur, r, allow_identify)
            events += 1
            for x in touched:
                for y in _cycle_members(c, x, p):
                    if y not in queued:
                        queued.add(y)
                        work.append(y)
    return events


def _glue_rgons(c: Complex, s: int, t: int, r: int, allow_identify: bool = True) -> list[int]:
    """Glue the whole open r-gons through s and t along face 0, pairing triangles in step.

    Where a triangle pair is already glued elsewhere the partners are identified.
    """
    touched = []
    a, b = s, t
    for i in range(2 * r):
        if i:
            f = 3 if i % 2 == 1 else 2
            a = c.neighbor(a, f)
            b = c.neighbor(b, f)
            if a is None or b is None:
                break
        na = c.neighbor(a, 0)
        nb_ = c.neighbor(b, 0)
        if not allow_identify and not (na is None and nb_ is None) and na != b:
            raise IdentificationNeeded(f"r-gons through {s} and {t} are glued elsewhere")
        if na is None and nb_ is None:
            if a != b:
                c.glue(a, 0, b)
                touched.append(a)
        elif na is None:
            touched.extend(_identify_tracked(c, nb_, a))
        elif nb_ is None:
            touched.extend(_identify_tracked(c, na, b))
        elif na != b:
            touched.extend(_identify_tracked(c, na, b))
        a, b = c.find(a), c.find(b)
    return touched


def _identify_tracked(c: Complex, s: int, t: int) -> list[int]:
    touched: list[int] = []
    c.identify(s, t, touched)
    return [c.find(x) for x in touched]


def close_naive(c: Complex, p: int, r: int) -> int:
    """Reference fixpoint: repeated full scans in ascending order."""
    ident_word = [1, 0] * p
    glue_word = [1] + [0, 1] * (p - 1)
    events = 0
    changed = True
    while changed:
        changed = False
        for s in c.classes():
            if c.find(s) != s:
                continue
            u = c.walk(s, ident_word)
            if u is not None:
                if u != s:
                    c.identify(s, u)
                    events += 1
                    changed = True
                continue
            if c.is_open(s, 0):
                u = c.walk(s, glue_word)
                if u is not None and u != s and c.is_open(u, 0):
                    _glue_rgons(c, s, u, r)
                    events += 1
                    changed = True
    return events


# -- orbifold detection --------------------------------------------------------------


def singular_edges(c: Complex, t: TessType) -> list[tuple[int, int, int]]:
    """Closed edge cycles whose length differs from the manifold value."""
    exp = expected_valences(t)
    bad = []
    for (s, i, j), (n, closed) in edge_valences(c).items():
        if closed and n != exp[(i, j)]:
            bad.append((s, i, j))
        elif n > exp[(i, j)]:
            bad.append((s, i, j))
    return bad


# -- driver -------------------------------------------------------------------------


def initial_state(t: TessType, z: QuadInt, max_simplices=DEFAULT_MAX_SIMPLICES,
                  max_iterations=DEFAULT_MAX_ITERATIONS) -> ConstructionState:
    if z.is_zero():
        raise ValueError("the cusp modulus must be non-zero")
    z = canonicalize(z)
    c = Complex()
    add_nanotube(c, t, z)
    state = ConstructionState(t, z, c, max_simplices=max_simplices, max_iterations=max_iterations)
    state.growth.append(len(c))
    state.sizes.append(len(c))
    _classify(state)
    return state


def _classify(state: ConstructionState) -> None:
    c, t = state.complex, state.t
    bad = singular_edges(c, t) if state.detect_orbifold else []
    if bad:
        state.status = Status.ORBIFOLD
        s, i, j = bad[0]
        state.reason = f"edge ({i},{j}) of simplex {s} has the wrong valence"
        return
    if c.is_closed():
        state.status = Status.FINISHED


def projected_size(state: ConstructionState) -> int:
    """Upper bound on the size after the next step."""
    rgons = open_rgons(state.complex, state.t.r)
    return len(state.complex) + len(rgons) * nanotube_size(state.t, state.z)


def step(state: ConstructionState) -> ConstructionState:
    if state.status is not Status.IN_PROGRESS:
        raise ValueError(f"cannot step a construction in state {state.status.value}")
    c, t, z = state.complex, state.t, state.z
    if len(c) > state.max_simplices:
        state.status = Status.BUDGET_EXCEEDED
        state.reason = "simplex budget"
        return state
    rgons = open_rgons(c, t.r, folded_ok=not state.detect_orbifold)
    if state.iteration >= state.max_iterations:
        state.status = Status.BUDGET_EXCEEDED
        state.reason = "iteration budget"
        return state
    first_new = c.n_allocated
    for rg in rgons:
        attach(c, t, z, rg)
    try:
        close(c, t.p, t.r)
    except (InconsistentGluing, OrientationClash) as exc:
        state.status = Status.ORBIFOLD
        state.reason = str(exc)
        return state
    state.iteration += 1
    state.growth.append(len(c) - state.sizes[-1])
    state.sizes.append(len(c))
    if state.after_step is not None:
        state.after_step(state, first_new)
        if state.status is not Status.IN_PROGRESS:
            return state
    _classify(state)
    return state


def build_universal(t: TessType, z: QuadInt, max_simplices=DEFAULT_MAX_SIMPLICES,
                    max_iterations=DEFAULT_MAX_ITERATIONS, after_step=None) -> ConstructionState:
    state = initial_state(t, z, max_simplices, max_iterations)
    state.after_step = after_step
    while state.status is Status.IN_PROGRESS:
        step(state)
    return state


# -- boundary surface -------------------------------------------------------------------


@dataclass
class SurfaceEdge:
    label: int
    rgons: tuple[int, int]
    triangles: tuple[int, ...]
    ends: frozenset = frozenset()  # surface vertex ids


@dataclass
class BoundarySurface:
    rgons: list
    edges: list
    vertices: list  # per surface vertex, the set of r-gon ids around it
    clusters: list  # lists of r-gon ids
    p: int

    def label_histogram(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for e in self.edges:
            out[e.label] = out.get(e.label, 0) + 1
        return dict(sorted(out.items()))

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.rgons)

    def is_closed_surface(self) -> bool:
        return all(e.rgons[0] is not None and e.rgons[1] is not None for e in self.edges)


def _across(c: Complex, s: int, p: int) -> tuple[int | None, int]:
    """Walk 1,0,1,0,... from an open triangle to the next open triangle.

    Returns that triangle and the number of distinct nanotubes passed.
    """
    tags = {c.tag_of(s)}
    cur = s
    for _ in range(2 * p + 2):
        cur = c.neighbor(cur, 1)
        if cur is None:
            return None, len(tags)
        tags.add(c.tag_of(cur))
        if c.is_open(cur, 0):
            return cur, len(tags)
        cur = c.neighbor(cur, 0)
        tags.add(c.tag_of(cur))
    raise StrayOpenFace(f"no open triangle across the edge of {s}")


class _UF:
    def __init__(self):
        self.p = {}

    def find(self, x):
        p = self.p
        p.setdefault(x, x)
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x != y:
            self.p[y] = x


def boundary(state_or_complex, t: TessType | None = None) -> BoundarySurface:
    """The labelled surface of open r-gons, with its (p-1)-clusters."""
    if isinstance(state_or_complex, ConstructionState):
        c, t = state_or_complex.complex, state_or_complex.t
    else:
        c = state_or_complex
    p = t.p
    rgons = open_rgons(c, t.r)
    rgon_of = {}
    for k, rg in enumerate(rgons):
        for x in rg:
            rgon_of[x] = k
    edge_uf, vert_uf = _UF(), _UF()
    across = {}
    for x in rgon_of:
        edge_uf.find(x)
        vert_uf.find(x)
        y, label = _across(c, x, p)
        across[x] = (y, label)
        if y is not None:
            edge_uf.union(x, y)
            vert_uf.union(x, y)
        edge_uf.union(x, c.neighbor(x, 3))
        vert_uf.union(x, c.neighbor(x, 2))
    vgroups: dict[int, set[int]] = {}
    for x in rgon_of:
        vgroups.setdefault(vert_uf.find(x), set()).add(rgon_of[x])
    vroots = sorted(vgroups)
    vid = {root: k for k, root in enumerate(vroots)}
    vertices = [vgroups[root] for root in vroots]
    groups: dict[int, list[int]] = {}
    for x in rgon_of:
        groups.setdefault(edge_uf.find(x), []).append(x)
    edges = []
    for root in sorted(groups):
        tris = tuple(sorted(groups[root]))
        sides = sorted({rgon_of[x] for x in tris})
        label = max(across[x][1] for x in tris)
        pair = (sides[0], sides[-1])
        ends = frozenset(vid[vert_uf.find(x)] for x in tris)
        edges.append(SurfaceEdge(label, pair, tris, ends))

    cl_uf = _UF()
    for k in range(len(rgons)):
        cl_uf.find(k)
    for e in edges:
        if e.label >= p - 1:
            cl_uf.union(*e.rgons)
    cl: dict[int, list[int]] = {}
    for k in range(len(rgons)):
        cl.setdefault(cl_uf.find(k), []).append(k)
    clusters = sorted(cl.values(), key=lambda g: g[0])
    return BoundarySurface(rgons, edges, vertices, clusters, p)


def is_small_cluster(surface: BoundarySurface, cluster: list[int], q: int) -> bool:
    """A single r-gon, or at most q r-gons fanned around one common vertex.

    In the fan case every high-label edge inside the cluster must touch that
    vertex.
    """
    if len(cluster) == 1:
        return True
    if len(cluster) > q:
        return False
    members = set(cluster)
    high = [e for e in surface.edges
            if e.label >= surface.p - 1 and e.rgons[0] in members and e.rgons[1] in members]
    for k, around in enumerate(surface.vertices):
        if members <= around and all(k in e.ends for e in high):
            return True
    return False


def cluster_report(surface: BoundarySurface, q: int) -> list[dict]:
    return [{"size": len(g), "small": is_small_cluster(surface, g, q)} for g in surface.clusters]


# -- simplified construction --------------------------------------------------------------


def simplified_step(state: ConstructionState) -> ConstructionState:
    """One iteration attaching a single nanotube per (p-1)-cluster, closing by gluing only.

    Raises IdentificationNeeded where this shortcut does not apply.
    """
    c, t, z = state.complex, state.t, state.z
    surf = boundary(c, t)
    for g in surf.clusters:
        attach(c, t, z, surf.rgons[g[0]])
    close(c, t.p, t.r, allow_identify=False)
    state.iteration += 1
    state.growth.append(len(c) - state.sizes[-1])
    state.sizes.append(len(c))
    _classify(state)
    return state


# -- word action ----------------------------------------------------------------------------

_LETTER_FACES = {"P": (0, 1), "Q": (1, 2), "R": (2, 3)}


def parse_word(text: str) -> list[tuple[str, int]]:
    """Parse words like ``PQR``, ``(PQ)2``, ``R^-1``, ``(QR4)4 (RQR2)1``.

    Lower-case letters are inverses. Returns (letter, +1/-1) steps.
    """
    pos = 0
    s = text.replace(" ", "")

    def exponent():
        nonlocal pos
        if pos < len(s) and s[pos] == "^":
            pos += 1
        start = pos
        if pos < len(s) and s[pos] == "-":
            pos += 1
        while pos < len(s) and s[pos].isdigit():
            pos += 1
        if pos == start:
            return 1
        return int(s[start:pos])

    def seq():
        nonlocal pos
        out = []
        while pos < len(s) and s[pos] != ")":
            ch = s[pos]
            if ch == "(":
                pos += 1
                inner = seq()
                if pos >= len(s) or s[pos] != ")":
                    raise ValueError(f"unbalanced parentheses in {text!r}")
                pos += 1
            elif ch.upper() in _LETTER_FACES:
                pos += 1
                inner = [(ch.upper(), 1 if ch.isupper() else -1)]
            else:
                raise ValueError(f"unexpected {ch!r} in word {text!r}")
            n = exponent()
            if n < 0:
                inner = [(l, -e) for l, e in reversed(inner)]
                n = -n
            out.extend(inner * n)
        return out

    word = seq()
    if pos != len(s):
        raise ValueError(f"unbalanced parentheses in {text!r}")
    return word


def word_faces(word) -> list[int]:
    if isinstance(word, str):
        word = parse_word(word)
    faces = []
    for letter, e in word:
        a, b = _LETTER_FACES[letter]
        faces.extend((a, b) if e > 0 else (b, a))
    return faces


def apply_word(c: Complex, base: int, word) -> int:
    """base . word under the right action: P walks faces 0,1; Q 1,2; R 2,3."""
    out = c.walk(base, word_faces(word))
    if out is None:
        raise OpenComplex("word runs into an open face")
    return out


def relators(t: TessType, z: QuadInt) -> list[str]:
    z = canonicalize(z)
    h = t.r // 2
    cusp = f"(QR{h + 1}){z.a}"
    if z.b:
        cusp += f" (RQR{h}){z.b}"
    return [f"P{t.p}", f"Q{t.q}", f"R{t.r}", "(PQ)2", "(QR)2", "(PQR)2", cusp]


def positive_classes(c: Complex) -> list[int]:
    return [s for s in c.classes() if c.orient[s] > 0]


def symmetry_generators(c: Complex) -> tuple[list[int], list[int], list[int]]:
    """Permutations of positively oriented classes (0-based) induced by P, Q, R."""
    if not c.is_closed():
        raise OpenComplex("symmetry generators need a closed complex")
    pos = positive_classes(c)
    index = {s: k for k, s in enumerate(pos)}
    gens = []
    for letter in "PQR":
        faces = _LETTER_FACES[letter]
        gens.append([index[c.walk(s, faces)] for s in pos])
    return tuple(gens)


def _perm_word(gens, word) -> list[int]:
    """Permutation sending i to i . word."""
    n = len(gens[0])
    inv = {}
    cur = list(range(n))
    for letter, e in parse_word(word) if isinstance(word, str) else word:
        g = gens["PQR".index(letter)]
        if e < 0:
            if letter not in inv:
                h = [0] * n
                for i, j in enumerate(g):
                    h[j] = i
                inv[letter] = h
            g = inv[letter]
        cur = [g[x] for x in cur]
    return cur


def relator_holds(gens, word) -> bool:
    perm = _perm_word(gens, word)
    return all(i == j for i, j in enumerate(perm))


def automorphism(c: Complex, s: int, t: int) -> dict[int, int] | None:
    """The face-preserving self-map sending s to t, if one exists."""
    if c.orient[c.find(s)] != c.orient[c.find(t)]:
        return None
    s, t = c.find(s), c.find(t)
    phi = {s: t}
    used = {t}
    queue = deque([s])
    while queue:
        a = queue.popleft()
        b = phi[a]
        for f in range(4):
            na, nb_ = c.neighbor(a, f), c.neighbor(b, f)
            if (na is None) != (nb_ is None):
                return None
            if na is None:
                continue
            if na in phi:
                if phi[na] != nb_:
                    return None
            else:
                if nb_ in used:
                    return None
                phi[na] = nb_
                used.add(nb_)
                queue.append(na)
    return phi if len(phi) == len(c) else None


def is_regular(c: Complex) -> bool:
    """Whether automorphisms carry a base simplex to its P, Q and R images.

    These generate a group of automorphisms transitive on positive classes.
    """
    base = positive_classes(c)[0]
    return all(automorphism(c, base, c.walk(base, _LETTER_FACES[l])) is not None for l in "PQR")


def orbit_size(gens, start: int = 0) -> int:
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen)


def group_order(c: Complex) -> int:
    """Order of the group generated by the symmetry generators.

    For a regular complex the right action is regular, because its
    centralizer (the automorphisms) is transitive; the order is then the orbit
    size. Otherwise fall back to Schreier-Sims.
    """
    gens = symmetry_generators(c)
    if is_regular(c):
        return orbit_size(gens)
    from sympy.combinatorics import Permutation, PermutationGroup

    return int(PermutationGroup([Permutation(g) for g in gens]).order())


def verify_cusp_modulus(c: Complex, z: QuadInt, t: TessType) -> bool:
    """Every cusp link is a torus made of norm_sq(z) r-gons of 2r triangles each."""
    from .complex import edge_classes

    n = norm_sq(z)
    cusp = vertex_classes(c, c.ideal_label)
    link_verts = [edge_classes(c, 0, j) for j in (1, 2, 3)]
    per: dict[int, dict] = {}
    for s, k in cusp.items():
        d = per.setdefault(k, {"F": 0, "V1": set(), "V2": set(), "V3": set()})
        d["F"] += 1
        d["V1"].add(link_verts[0][s])
        d["V2"].add(link_verts[1][s])
        d["V3"].add(link_verts[2][s])
    for d in per.values():
        f = d["F"]
        v = len(d["V1"]) + len(d["V2"]) + len(d["V3"])
        e = 3 * f // 2
        if f != 2 * t.r * n or len(d["V1"]) != n or v - e + f != 0:
            return False
    return True


# -- quotients ----------------------------------------------------------------------------------


def permutation_of(c: Complex, phi: dict[int, int]) -> list[int]:
    pos = positive_classes(c)
    index = {s: k for k, s in enumerate(pos)}
    return [index[phi[s]] for s in pos]


def _cycle_lengths(perm) -> list[int]:
    seen = [False] * len(perm)
    out = []
    for i in range(len(perm)):
        if seen[i]:
            continue
        n = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            n += 1
        out.append(n)
    return out


def deck_order(c: Complex, word) -> int | None:
    """Order of the automorphism sending the base to base . word, if it acts freely.

    Returns None when no such automorphism exists or it has fixed points.
    """
    base = positive_classes(c)[0]
    phi = automorphism(c, base, apply_word(c, base, word))
    if phi is None:
        return None
    lengths = set(_cycle_lengths(permutation_of(c, phi)))
    if len(lengths) != 1:
        return None
    return lengths.pop()


def quotient_by_words(c: Complex, words, t: TessType | None = None) -> Complex:
    """Quotient by the automorphisms sending the base simplex to base . w for each word."""
    if not c.is_closed():
        raise OpenComplex("quotients need a closed complex")
    q = c.compact()
    base = positive_classes(q)[0]
    for w in words:
        target = apply_word(q, base, w)
        if target == q.find(base):
            continue
        if automorphism(q, base, target) is None:
            raise NotFreeAction(f"no automorphism carries the base along {w!r}")
        try:
            q.identify(base, target)
        except (InconsistentGluing, OrientationClash) as exc:
            raise NotFreeAction(str(exc)) from exc
    if len(c) % len(q):
        raise NotFreeAction("quotient size does not divide the original")
    if t is not None and not is_manifold(q, t):
        raise NotFreeAction("the quotient is an orbifold")
    return q.compact()


def find_free_word(c: Complex, order: int, rng: random.Random | None = None,
                   max_len: int = 12, tries: int = 20000):
    """Random search for a word whose deck transformation acts freely with the given order."""
    rng = rng or random.Random(0)
    letters = "PQRpqr"
    for _ in range(tries):
        w = "".join(rng.choice(letters) for _ in range(rng.randint(1, max_len)))
        if deck_order(c, w) == order:
            return w
    return None
