"""
The barycentrically subdivided nanotube R>=0 x T*_z as a block of simplices.

Simplex (w, k, s) of a nanotube sits in the column over the r-gon centred at
residue w. Its vertices are: 0 the ideal point, 1 the r-gon centre, 2 the
midpoint of the edge leaving w in direction u**k, 3 the r-gon corner k - s
(corner c lies between directions c and c + 1). Face 0 is the open
triangle on the r-gon; faces 1, 2, 3 are glued inside the nanotube.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .complex import NONE, Complex, StrayOpenFace
from .lattice import Kind, QuadInt, ResidueRing, canonicalize, norm_sq


_SOLIDS = {
    (3, 3, 6): ("tetrahedron", 4),
    (3, 4, 4): ("octahedron", 8),
    (4, 3, 6): ("cube", 6),
    (5, 3, 6): ("dodecahedron", 12),
}


@dataclass(frozen=True)
class TessType:
    p: int
    q: int
    r: int

    def __post_init__(self):
        if (self.p, self.q, self.r) not in _SOLIDS:
            raise ValueError(f"unsupported type {{{self.p},{self.q},{self.r}}}")

    @classmethod
    def parse(cls, text: str) -> "TessType":
        parts = text.strip().strip("{}").split(",")
        if len(parts) != 3:
            raise ValueError(f"type must look like p,q,r: {text!r}")
        return cls(*(int(x) for x in parts))

    @property
    def kind(self) -> Kind:
        return Kind.from_r(self.r)

    @property
    def solid(self) -> str:
        return _SOLIDS[(self.p, self.q, self.r)][0]

    @property
    def faces_of_solid(self) -> int:
        return _SOLIDS[(self.p, self.q, self.r)][1]

    @property
    def simplices_per_solid(self) -> int:
        # every face of the solid is a p-gon cut into 2p triangles, coned to the centre
        return 2 * self.faces_of_solid * self.p

    def __str__(self) -> str:
        return f"{{{self.p},{self.q},{self.r}}}"


TYPES = tuple(TessType(*k) for k in _SOLIDS)


def index(w: int, k: int, s: int, r: int) -> int:
    return (w * r + k) * 2 + s


@lru_cache(maxsize=64)
def _template(r: int, z: QuadInt) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Neighbor table (faces 1..3, 4 slots per simplex) and orientations."""
    ring = ResidueRing(z)
    n = ring.n
    half = r // 2
    unit_res = [ring.of(QuadInt.unit(k, z.kind)) for k in range(r)]
    nb = [NONE] * (4 * 2 * r * n)
    orient = []
    for w in range(n):
        for k in range(r):
            for s in (0, 1):
                x = index(w, k, s, r)
                orient.append(1 if s == 0 else -1)
                nb[4 * x + 3] = index(w, k, 1 - s, r)
                if s == 0:
                    nb[4 * x + 2] = index(w, (k + 1) % r, 1, r)
                else:
                    nb[4 * x + 2] = index(w, (k - 1) % r, 0, r)
                w2 = ring.add(w, unit_res[k])
                nb[4 * x + 1] = index(w2, (k + half) % r, 1 - s, r)
    return tuple(nb), tuple(orient)


def nanotube_size(t: TessType, z: QuadInt) -> int:
    return 2 * t.r * norm_sq(z)


def add_nanotube(c: Complex, t: TessType, z: QuadInt) -> int:
    """Append one nanotube to c under a fresh tag; returns the first simplex id."""
    if z.is_zero():
        raise ValueError("the cusp modulus must be non-zero")
    if z.kind is not t.kind:
        raise ValueError(f"{z} is not in the ring matching {t}")
    nb, orient = _template(t.r, canonicalize(z))
    base = c.n_allocated
    tag = c.new_tag()
    m = len(orient)
    c.nb.extend(v + base if v != NONE else NONE for v in nb)
    c.orient.extend(orient)
    c.parent.extend(range(base, base + m))
    c.csize.extend([1] * m)
    c.tag.extend([tag] * m)
    c.n_classes += m
    return base


def make_nanotube(t: TessType, z: QuadInt) -> tuple[Complex, list[list[int]]]:
    """A standalone nanotube and its open r-gons."""
    c = Complex()
    add_nanotube(c, t, z)
    return c, open_rgons(c)


def rgon_cycle(c: Complex, s: int, length: int) -> list[int] | None:
    """Triangles around the r-gon of s, stepping through faces 3, 2, 3, ...

    Returns None if the cycle is broken or does not close after ``length``.
    """
    out = [c.find(s)]
    cur = out[0]
    for i in range(length - 1):
        cur = c.neighbor(cur, 3 if i % 2 == 0 else 2)
        if cur is None:
            return None
        out.append(cur)
    if c.neighbor(cur, 2) != out[0]:
        return None
    return out


def open_rgons(c: Complex, r: int | None = None, folded_ok: bool = False) -> list[list[int]]:
    """Partition the open face-0 triangles into r-gons.

    Each record starts at a positively oriented triangle and lists all 2r
    triangles in cyclic order. If r is None it is read off the first cycle.
    With ``folded_ok`` a shorter cycle whose length divides 2r is accepted;
    that is an r-gon folded onto itself by a rotation, as happens in
    orbifold quotients.
    """
    nb = c.nb
    seen = set()
    out = []
    for s in c.classes():
        if nb[4 * s] != NONE or s in seen:
            continue
        if c.orient[s] < 0:
            start = c.neighbor(s, 3)
            if start is None:
                raise StrayOpenFace(f"open triangle {s} has no face-3 neighbor")
        else:
            start = s
        cyc = [start]
        cur = start
        i = 0
        while True:
            cur = c.neighbor(cur, 3 if i % 2 == 0 else 2)
            i += 1
            if cur is None:
                raise StrayOpenFace(f"open r-gon through {s} is broken")
            if cur == start:
                break
            cyc.append(cur)
            if len(cyc) > 12:
                raise StrayOpenFace(f"open r-gon through {s} does not close")
        if r is not None and len(cyc) != 2 * r and not (folded_ok and (2 * r) % len(cyc) == 0):
            raise StrayOpenFace(f"r-gon through {s} has {len(cyc)} triangles, expected {2 * r}")
        for x in cyc:
            if nb[4 * x] != NONE:
                raise StrayOpenFace(f"r-gon through {s} is only partly open")
            seen.add(x)
        out.append(cyc)
    return out
