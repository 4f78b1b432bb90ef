"""
Writers (and one reader) for triangulations, presentations, permutation
generators and JSON reports, plus the chessboard complexes used as an
independent check on N^{3,3,6}_{2+2zeta}.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import asdict, dataclass, field
from itertools import combinations, permutations

from .complex import Complex, ComplexError, OpenComplex, vertex_classes
from .lattice import QuadInt, canonicalize
from .nanotube import TessType
from .universal import relators, symmetry_generators

SCHEMA = "tessellar-report-1"


class UnsupportedDimension(ComplexError):
    pass


class SnapPeaParseError(ValueError):
    pass


# -- SnapPea ------------------------------------------------------------------------------


def write_snappea(c: Complex, name: str = "tessellation") -> str:
    """SnapPea triangulation text. All gluing permutations are the identity.

    The non-ideal vertices are finite; they get cusp index -1 and the
    importing program is expected to remove them.
    """
    if not c.is_closed():
        raise OpenComplex("only closed complexes can be exported")
    k = c.compact()
    n = len(k)
    cusp_of = vertex_classes(k, k.ideal_label)
    n_cusps = len(set(cusp_of.values()))
    lines = [
        "% Triangulation",
        name,
        "not_attempted  0.0",
        "oriented_manifold",
        "CS_unknown",
        "",
        f"{n_cusps} 0",
    ]
    lines += ["    torus   0.000000000000   0.000000000000"] * n_cusps
    lines += ["", str(n)]
    zeros = " ".join(["0"] * 16)
    for s in range(n):
        nb = k.nb[4 * s: 4 * s + 4]
        lines.append(" ".join(f"{x:5d}" for x in nb))
        lines.append(" 0123 0123 0123 0123")
        cusp = [cusp_of[s] if v == k.ideal_label else -1 for v in range(4)]
        lines.append(" ".join(f"{x:5d}" for x in cusp))
        lines += [zeros] * 4
        lines.append("  0.000000000000   0.000000000000")
        lines.append("")
    return "\n".join(lines)


def read_snappea(text: str, ideal_label: int | None = None) -> Complex:
    """Parse a file written by write_snappea (identity gluings only).

    Orientations are recovered by 2-colouring; the ideal label is the vertex
    carrying non-negative cusp indices.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    if not lines or not lines[0].startswith("% Triangulation"):
        raise SnapPeaParseError("missing '% Triangulation' header")
    if lines[3] not in ("oriented_manifold", "oriented_orientable", "nonorientable_manifold"):
        raise SnapPeaParseError(f"unknown orientability {lines[3]!r}")
    body = [ln for ln in lines[5:] if ln]
    try:
        n_or, n_non = map(int, body[0].split())
        pos = 1 + n_or + n_non
        n = int(body[pos])
        pos += 1
        table, ideal = [], set()
        for _ in range(n):
            nb = [int(x) for x in body[pos].split()]
            perms = body[pos + 1].split()
            cusp = [int(x) for x in body[pos + 2].split()]
            pos += 8
            if any(p != "0123" for p in perms):
                raise SnapPeaParseError("only identity gluing permutations are supported")
            table.append(nb)
            ideal.update(v for v, x in enumerate(cusp) if x >= 0)
    except (IndexError, ValueError) as exc:
        raise SnapPeaParseError(str(exc)) from exc
    if ideal_label is None:
        ideal_label = min(ideal) if ideal else 0
    orient = [0] * n
    for root in range(n):
        if orient[root]:
            continue
        orient[root] = 1
        queue = deque([root])
        while queue:
            s = queue.popleft()
            for t in table[s]:
                if t < 0:
                    continue
                if orient[t] == 0:
                    orient[t] = -orient[s]
                    queue.append(t)
                elif orient[t] == orient[s]:
                    raise SnapPeaParseError("triangulation is not orientable with identity gluings")
    return Complex.from_table(orient, table, ideal_label)


# -- presentations and permutations ------------------------------------------------------------


def write_presentation(t: TessType, z: QuadInt) -> str:
    z = canonicalize(z)
    rels = relators(t, z)
    lines = [
        f"# symmetry group of the universal regular tessellation {t} with cusp modulus {z}",
        "generators: P Q R",
        f"relators: {len(rels)}",
    ]
    lines += rels
    return "\n".join(lines) + "\n"


def cycle_notation(perm: list[int]) -> str:
    """1-based cycle notation, fixed points omitted, '()' for the identity."""
    seen = [False] * len(perm)
    out = []
    for i in range(len(perm)):
        if seen[i] or perm[i] == i:
            seen[i] = True
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j + 1)
            j = perm[j]
        out.append("(" + ",".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


def write_perm_generators(c: Complex) -> str:
    gens = symmetry_generators(c)
    n = len(gens[0])
    lines = [f"# right action of P, Q, R on {n} positively oriented simplices"]
    for name, g in zip("PQR", gens):
        lines.append(f"{name} := {cycle_notation(g)};")
    lines.append("G := Group(P, Q, R);")
    return "\n".join(lines) + "\n"


def parse_cycle_notation(text: str, n: int) -> list[int]:
    perm = list(range(n))
    body = text.strip().rstrip(";")
    for chunk in body.split(")"):
        chunk = chunk.strip().lstrip("(")
        if not chunk:
            continue
        pts = [int(x) - 1 for x in chunk.split(",")]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            perm[a] = b
    return perm


# -- chessboard complexes --------------------------------------------------------------------------


def rook_placements(m: int, n: int, k: int) -> list[tuple[tuple[int, int], ...]]:
    """Non-taking placements of k rooks on an m x n board, as sorted square tuples."""
    out = []
    for rows in combinations(range(m), k):
        for cols in permutations(range(n), k):
            out.append(tuple(zip(rows, cols)))
    return out


def chessboard_counts(m: int, n: int) -> list[int]:
    """f-vector of the chessboard complex: number of j-simplices for j = 0, 1, ..."""
    return [len(rook_placements(m, n, k)) for k in range(1, min(m, n) + 1)]


def build_chessboard(m: int = 4, n: int = 5) -> Complex:
    """Barycentric subdivision of the 4 x 5 chessboard complex.

    A simplex is a chain s0 < s1 < s2 < s3 of rook placements with i+1 rooks
    in s_i; s_i sits at vertex label 3 - i, so the board squares (label 3)
    are the ideal vertices.
    """
    if (m, n) != (4, 5):
        raise UnsupportedDimension("only the 4 x 5 board gives a closed 3-dimensional complex")
    tops = rook_placements(m, n, 4)
    chains = []
    for top in tops:
        for order in permutations(top):
            chains.append(tuple(frozenset(order[: i + 1]) for i in range(4)))
    # chains sharing all but one position, grouped by the missing position
    buckets: dict = {}
    for k, ch in enumerate(chains):
        for i in range(4):
            key = (i,) + ch[:i] + ch[i + 1:]
            buckets.setdefault(key, []).append(k)
    table = [[-1] * 4 for _ in chains]
    for key, members in buckets.items():
        if len(members) != 2:
            raise ComplexError(f"face shared by {len(members)} chains")
        a, b = members
        label = 3 - key[0]
        table[a][label] = b
        table[b][label] = a
    orient = [0] * len(chains)
    orient[0] = 1
    queue = deque([0])
    while queue:
        s = queue.popleft()
        for t in table[s]:
            if orient[t] == 0:
                orient[t] = -orient[s]
                queue.append(t)
            elif orient[t] == orient[s]:
                raise ComplexError("chessboard subdivision is not orientable")
    return Complex.from_table(orient, table, ideal_label=3)


# -- JSON report --------------------------------------------------------------------------------


@dataclass
class Report:
    tess_type: str
    z: str
    status: str
    simplices: int
    growth: list
    solids: int | None = None
    cusps: int | None = None
    is_manifold: bool | None = None
    h1: dict | None = None
    cuspidal_h1: dict | None = None
    homology_link_complement: bool | None = None
    clusters: list = field(default_factory=list)
    variant: str | None = None
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        d = {k: v for k, v in asdict(self).items() if v is not None and v != {} and v != []}
        d["schema"] = SCHEMA
        if "growth" not in d:
            d["growth"] = list(self.growth)
        return d


def write_report(report: Report | dict) -> str:
    d = report.as_dict() if isinstance(report, Report) else dict(report)
    d.setdefault("schema", SCHEMA)
    return json.dumps(d, sort_keys=True, indent=2) + "\n"
