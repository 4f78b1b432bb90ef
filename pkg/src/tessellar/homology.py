"""
Integral first homology of a cusped manifold from its spine.

Each simplex minus its ideal vertex retracts onto its face 0, so the face-0
triangles (one cell per glued pair) form a spine. Vertices and edges of the
spine are the classes of non-ideal vertices and edges. H1 is read off a
Smith normal form of the boundary map restricted to non-tree edges.
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from math import gcd

from .complex import Complex, ComplexError, OpenComplex, cusp_count, edge_classes, vertex_classes


class RankDeficit(ComplexError):
    pass


@dataclass(frozen=True)
class HomologyResult:
    rank: int
    torsion: tuple = ()

    def __str__(self) -> str:
        parts = []
        if self.rank:
            parts.append(f"Z^{self.rank}")
        groups: dict[int, int] = {}
        for d in self.torsion:
            groups[d] = groups.get(d, 0) + 1
        for d, n in sorted(groups.items()):
            parts.append(f"(Z/{d})^{n}" if n > 1 else f"Z/{d}")
        return " + ".join(parts) if parts else "0"

    def as_dict(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}


@dataclass
class Spine:
    n_vertices: int
    n_edges: int
    edges: list  # (tail vertex, head vertex) per edge
    triangles: list  # [(edge, sign), ...] per triangle

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + len(self.triangles)


# -- Smith normal form ------------------------------------------------------------------


def _dense_snf(rows: list[list[int]]) -> list[int]:
    """Nonzero invariant factors of a dense integer matrix (destroys ``rows``)."""
    a = [r[:] for r in rows if any(r)]
    if not a:
        return []
    ncols = len(a[0])
    diag = []
    t = 0
    nrows = len(a)
    while True:
        # pick the smallest nonzero entry in the remaining block
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, nrows):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ri, rt = a[i], a[t]
                        for j in range(t, ncols):
                            ri[j] -= q * rt[j]
                    if a[i][t]:
                        done = False
            for j in range(t + 1, ncols):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for row in a[t:]:
                            row[j] -= q * row[t]
                    if a[t][j]:
                        done = False
            if done:
                # make the pivot divide the rest of the block
                bad = None
                for i in range(t + 1, nrows):
                    for j in range(t + 1, ncols):
                        if a[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                rt, rb = a[t], a[bad]
                for j in range(t, ncols):
                    rt[j] += rb[j]
                continue
            # move the smallest entry of row/column t to the pivot
            best = (abs(a[t][t]), t, t)
            for i in range(t + 1, nrows):
                if a[i][t] and abs(a[i][t]) < best[0]:
                    best = (abs(a[i][t]), i, t)
            for j in range(t + 1, ncols):
                if a[t][j] and abs(a[t][j]) < best[0]:
                    best = (abs(a[t][j]), t, j)
            _, i, j = best
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
        if t >= nrows or t >= ncols:
            break
    return diag


def smith_normal_form(matrix) -> tuple[list[int], int]:
    """Invariant factors d1 | d2 | ... of an integer matrix, and its rank.

    Accepts a dense list of rows.
    """
    rows = [list(map(int, r)) for r in matrix]
    ncols = len(rows[0]) if rows else 0
    sparse = [{j: v for j, v in enumerate(r) if v} for r in rows]
    units, rest = _sparse_eliminate(sparse, ncols)
    d = sorted(units + _normalize(rest))
    return d, len(d)


def _normalize(diag: list[int]) -> list[int]:
    """Turn a diagonal into invariant factors (d_i | d_{i+1})."""
    d = sorted(x for x in diag if x)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                a, b = d[i], d[j]
                if b % a:
                    g = gcd(a, b)
                    d[i], d[j] = g, a * b // g
                    changed = True
        d.sort()
    return d


def _sparse_eliminate(rows: list[dict], ncols: int) -> tuple[list[int], list[int]]:
    """Eliminate unit pivots (Markowitz order), then dense SNF on what is left.

    Returns the unit factors found and the remaining diagonal.
    """
    cols: list[set] = [set() for _ in range(ncols)]
    for i, r in enumerate(rows):
        for j in r:
            cols[j].add(i)
    alive_rows = set(i for i, r in enumerate(rows) if r)
    units = []
    dead_cols = set()
    while True:
        before = len(units)
        _unit_pass(rows, cols, alive_rows, dead_cols, units)
        if len(units) == before:
            break
    # whatever is left has no unit entries
    left_rows = sorted(i for i in alive_rows if rows[i])
    left_cols = sorted({k for i in left_rows for k in rows[i]})
    if not left_rows:
        return units, []
    index = {k: n for n, k in enumerate(left_cols)}
    dense = []
    for i in left_rows:
        row = [0] * len(left_cols)
        for k, v in rows[i].items():
            row[index[k]] = v
        dense.append(row)
    return units, _dense_snf(dense)


def _unit_pass(rows, cols, alive_rows, dead_cols, units) -> None:
    heap = [(len(cols[j]), j) for j in range(len(cols)) if cols[j] and j not in dead_cols]
    heapq.heapify(heap)
    while heap:
        cnt, j = heapq.heappop(heap)
        if j in dead_cols or not cols[j]:
            continue
        if cnt != len(cols[j]):
            heapq.heappush(heap, (len(cols[j]), j))
            continue
        # unit entry in this column with the shortest row
        piv = None
        for i in cols[j]:
            if abs(rows[i][j]) == 1 and (piv is None or len(rows[i]) < len(rows[piv])):
                piv = i
        if piv is None:
            continue
        prow = rows[piv]
        pv = prow[j]
        for i in list(cols[j]):
            if i == piv:
                continue
            r = rows[i]
            factor = r[j] * pv  # pv is +-1, so r[j]/pv == r[j]*pv
            for k, v in prow.items():
                nv = r.get(k, 0) - factor * v
                if nv:
                    if k not in r:
                        cols[k].add(i)
                    r[k] = nv
                elif k in r:
                    del r[k]
                    cols[k].discard(i)
            if not r:
                alive_rows.discard(i)
        for k in prow:
            cols[k].discard(piv)
            if k != j and cols[k]:
                heapq.heappush(heap, (len(cols[k]), k))
        rows[piv] = {}
        alive_rows.discard(piv)
        dead_cols.add(j)
        units.append(1)


def invariant_factors_sparse(rows: list[dict], ncols: int) -> list[int]:
    units, rest = _sparse_eliminate(rows, ncols)
    return sorted(units + _normalize(rest))


# -- spine and H1 --------------------------------------------------------------------------


def spine(c: Complex) -> Spine:
    if not c.is_closed():
        raise OpenComplex("the spine needs a closed complex")
    verts = {}
    offset = 0
    for label in (1, 2, 3):
        cls = vertex_classes(c, label)
        n = len(set(cls.values()))
        verts[label] = {s: offset + k for s, k in cls.items()}
        offset += n
    edges = []
    edge_of = {}
    for i, j in ((1, 2), (1, 3), (2, 3)):
        cls = edge_classes(c, i, j)
        base = len(edges)
        n = len(set(cls.values()))
        ends = [None] * n
        for s, k in cls.items():
            if ends[k] is None:
                ends[k] = (verts[i][s], verts[j][s])
        edges.extend(ends)
        edge_of[(i, j)] = {s: base + k for s, k in cls.items()}
    triangles = []
    for s in c.classes():
        if c.orient[s] < 0:
            continue
        triangles.append([
            (edge_of[(2, 3)][s], 1),
            (edge_of[(1, 3)][s], -1),
            (edge_of[(1, 2)][s], 1),
        ])
    return Spine(offset, len(edges), edges, triangles)


def _spanning_tree_edges(sp: Spine) -> tuple[set[int], int]:
    adj: list[list[tuple[int, int]]] = [[] for _ in range(sp.n_vertices)]
    for e, (a, b) in enumerate(sp.edges):
        adj[a].append((b, e))
        adj[b].append((a, e))
    seen = [False] * sp.n_vertices
    tree = set()
    components = 0
    for root in range(sp.n_vertices):
        if seen[root]:
            continue
        components += 1
        seen[root] = True
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w, e in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    tree.add(e)
                    queue.append(w)
    return tree, components


def h1_of_spine(sp: Spine) -> HomologyResult:
    tree, _ = _spanning_tree_edges(sp)
    row_of = {}
    for e in range(sp.n_edges):
        if e not in tree:
            row_of[e] = len(row_of)
    # boundary matrix transposed: one sparse row per triangle, columns = non-tree edges
    rows = []
    for tri in sp.triangles:
        r: dict[int, int] = {}
        for e, sgn in tri:
            if e in row_of:
                k = row_of[e]
                r[k] = r.get(k, 0) + sgn
                if r[k] == 0:
                    del r[k]
        rows.append(r)
    factors = invariant_factors_sparse(rows, len(row_of))
    rank = len(row_of) - len(factors)
    return HomologyResult(rank, tuple(d for d in factors if d > 1))


def h1(c: Complex) -> HomologyResult:
    return h1_of_spine(spine(c))


def cuspidal_h1(c: Complex, h: HomologyResult | None = None) -> HomologyResult:
    h = h or h1(c)
    n = cusp_count(c)
    if h.rank < n:
        raise RankDeficit(f"H1 has rank {h.rank} but there are {n} cusps")
    return HomologyResult(h.rank - n, h.torsion)


def is_homology_link_complement(c: Complex, h: HomologyResult | None = None) -> bool:
    h = h or h1(c)
    return h.rank == cusp_count(c) and not h.torsion
