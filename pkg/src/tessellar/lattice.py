"""
Exact arithmetic in the Gaussian integers Z[i] and the Eisenstein integers
Z[zeta], plus the combinatorial tori T_z and T*_z obtained by quotienting the
square or hexagonal lattice by a principal ideal.

Eisenstein integers use zeta = (1 + sqrt(-3))/2, the primitive sixth root of
unity, so zeta**2 = zeta - 1.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache


class Kind(Enum):
    GAUSS = "gauss"
    EISENSTEIN = "eisenstein"

    @property
    def discriminant(self) -> int:
        return -4 if self is Kind.GAUSS else -3

    @property
    def unit_order(self) -> int:
        return 4 if self is Kind.GAUSS else 6

    @property
    def symbol(self) -> str:
        return "i" if self is Kind.GAUSS else "z"

    @classmethod
    def from_r(cls, r: int) -> "Kind":
        if r == 4:
            return cls.GAUSS
        if r == 6:
            return cls.EISENSTEIN
        raise ValueError(f"r must be 4 or 6, got {r}")

    @classmethod
    def from_discriminant(cls, d: int) -> "Kind":
        if d == -4:
            return cls.GAUSS
        if d == -3:
            return cls.EISENSTEIN
        raise ValueError(f"discriminant must be -3 or -4, got {d}")


GAUSS = Kind.GAUSS
EISENSTEIN = Kind.EISENSTEIN


@dataclass(frozen=True, order=True)
class QuadInt:
    """The element a + b*u of Z[u], u = i (Gauss) or zeta (Eisenstein)."""

    a: int
    b: int
    kind: Kind = Kind.EISENSTEIN

    # -- construction -----------------------------------------------------

    @classmethod
    def unit(cls, k: int, kind: Kind) -> "QuadInt":
        """u**k for any integer k."""
        return _unit_table(kind)[k % kind.unit_order]

    @classmethod
    def parse(cls, text: str, kind: Kind | None = None) -> "QuadInt":
        """Parse ``"a"``, ``"a+bi"`` or ``"a+bz"`` (z standing for zeta).

        A bare integer needs ``kind``; otherwise the suffix decides.
        """
        s = text.replace(" ", "").lower()
        m = re.fullmatch(r"([+-]?\d+)?(?:([+-])(\d*)([iz]))?", s)
        if not s or m is None:
            m2 = re.fullmatch(r"([+-]?\d*)([iz])", s)
            if m2 is None:
                raise ValueError(f"cannot parse {text!r} as a+bu")
            coef = m2.group(1)
            b = int(coef + "1") if coef in ("", "+", "-") else int(coef)
            a, sym = 0, m2.group(2)
        else:
            a = int(m.group(1)) if m.group(1) else 0
            sym = m.group(4)
            if sym is None:
                b = 0
            else:
                mag = int(m.group(3)) if m.group(3) else 1
                b = -mag if m.group(2) == "-" else mag
        if sym is not None:
            parsed_kind = Kind.GAUSS if sym == "i" else Kind.EISENSTEIN
            if kind is not None and kind is not parsed_kind:
                raise ValueError(f"{text!r} is not an element of the {kind.value} integers")
            kind = parsed_kind
        if kind is None:
            raise ValueError(f"{text!r} has no unit symbol; the ring kind must be given")
        return cls(a, b, kind)

    # -- ring operations --------------------------------------------------

    def _coerce(self, other) -> "QuadInt":
        if isinstance(other, QuadInt):
            if other.kind is not self.kind:
                raise TypeError("cannot mix Gaussian and Eisenstein integers")
            return other
        if isinstance(other, int):
            return QuadInt(other, 0, self.kind)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadInt(self.a + o.a, self.b + o.b, self.kind)

    __radd__ = __add__

    def __neg__(self):
        return QuadInt(-self.a, -self.b, self.kind)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadInt(self.a - o.a, self.b - o.b, self.kind)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b, c, d = self.a, self.b, o.a, o.b
        if self.kind is Kind.GAUSS:
            return QuadInt(a * c - b * d, a * d + b * c, self.kind)
        # zeta**2 = zeta - 1
        return QuadInt(a * c - b * d, a * d + b * c + b * d, self.kind)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadInt(1, 0, self.kind)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> "QuadInt":
        if self.kind is Kind.GAUSS:
            return QuadInt(self.a, -self.b, self.kind)
        # conj(zeta) = 1 - zeta
        return QuadInt(self.a + self.b, -self.b, self.kind)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_unit(self) -> bool:
        return norm_sq(self) == 1

    def inverse(self) -> "QuadInt":
        """Inverse of a unit."""
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit")
        return self.conj()

    def unit_exponent(self) -> int:
        """k with u**k == self, for a unit."""
        for k, e in enumerate(_unit_table(self.kind)):
            if e == self:
                return k
        raise ValueError(f"{self} is not a unit")

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        sym = self.kind.symbol
        coef = "" if abs(self.b) == 1 else str(abs(self.b))
        if self.a == 0:
            return ("-" if self.b < 0 else "") + coef + sym
        return f"{self.a}{'-' if self.b < 0 else '+'}{coef}{sym}"

    def to_complex(self) -> complex:
        if self.kind is Kind.GAUSS:
            return complex(self.a, self.b)
        return complex(self.a + 0.5 * self.b, self.b * 3 ** 0.5 / 2)


@lru_cache(maxsize=None)
def _unit_table(kind: Kind) -> tuple[QuadInt, ...]:
    u = QuadInt(0, 1, kind)
    out = [QuadInt(1, 0, kind)]
    for _ in range(kind.unit_order - 1):
        out.append(out[-1] * u)
    return tuple(out)


def units(kind: Kind) -> tuple[QuadInt, ...]:
    return _unit_table(kind)


def norm_sq(z: QuadInt) -> int:
    if z.kind is Kind.GAUSS:
        return z.a * z.a + z.b * z.b
    return z.a * z.a + z.a * z.b + z.b * z.b


def _require_nonzero(z: QuadInt) -> None:
    if z.is_zero():
        raise ValueError("the cusp modulus must be non-zero")


def orbit(z: QuadInt) -> list[QuadInt]:
    """All u**k * z and u**k * conj(z)."""
    out = []
    for w in (z, z.conj()):
        for e in units(z.kind):
            out.append(e * w)
    return out


def canonicalize(z: QuadInt) -> QuadInt:
    """The representative a + b*u with a >= b >= 0 of z up to units and conjugation."""
    _require_nonzero(z)
    cands = [w for w in orbit(z) if w.a >= w.b >= 0]
    return min(cands)


def is_canonical(z: QuadInt) -> bool:
    return z.a >= z.b >= 0 and not z.is_zero()


def comb_length(z: QuadInt) -> int:
    """Minimal number of units summing to z; a + b in canonical form."""
    c = canonicalize(z)
    return c.a + c.b


# -- residues modulo a principal ideal -----------------------------------------


def _round_div(num: int, den: int) -> int:
    # nearest integer, halves rounded down
    return -((-2 * num + den) // (2 * den))


def reduce(w: QuadInt, z: QuadInt) -> QuadInt:
    """Representative of w modulo the ideal <z>.

    Reduces against the lattice basis {z, u*z}: writes w = alpha*z + beta*(u*z)
    over the rationals and subtracts the nearest lattice point. The result only
    depends on the class of w.
    """
    _require_nonzero(z)
    uz = QuadInt(0, 1, z.kind) * z
    # columns of the basis matrix in coordinates (1, u)
    m00, m10 = z.a, z.b
    m01, m11 = uz.a, uz.b
    det = m00 * m11 - m01 * m10
    alpha_num = m11 * w.a - m01 * w.b
    beta_num = -m10 * w.a + m00 * w.b
    if det < 0:
        det, alpha_num, beta_num = -det, -alpha_num, -beta_num
    alpha = _round_div(alpha_num, det)
    beta = _round_div(beta_num, det)
    return w - z * alpha - uz * beta


def congruent(w1: QuadInt, w2: QuadInt, z: QuadInt) -> bool:
    return reduce(w1 - w2, z).is_zero()


@lru_cache(maxsize=256)
def residues(z: QuadInt) -> tuple[QuadInt, ...]:
    """Coset representatives of Z[u]/<z>, exactly norm_sq(z) of them."""
    _require_nonzero(z)
    one = QuadInt(1, 0, z.kind)
    u = QuadInt(0, 1, z.kind)
    start = reduce(QuadInt(0, 0, z.kind), z)
    seen = {start}
    order = [start]
    i = 0
    while i < len(order):
        w = order[i]
        i += 1
        for step in (one, u):
            v = reduce(w + step, z)
            if v not in seen:
                seen.add(v)
                order.append(v)
    order.sort()
    return tuple(order)


class ResidueRing:
    """Z[u]/<z> with residues numbered 0..n-1 and table-driven arithmetic."""

    def __init__(self, z: QuadInt):
        _require_nonzero(z)
        self.z = z
        self.kind = z.kind
        self.elements = residues(z)
        self.index = {w: k for k, w in enumerate(self.elements)}
        self.n = len(self.elements)
        self.zero = self.index[reduce(QuadInt(0, 0, self.kind), z)]
        self.one = self.index[reduce(QuadInt(1, 0, self.kind), z)]

    def of(self, w: QuadInt | int) -> int:
        if isinstance(w, int):
            w = QuadInt(w, 0, self.kind)
        return self.index[reduce(w, self.z)]

    def add(self, x: int, y: int) -> int:
        return self.of(self.elements[x] + self.elements[y])

    def mul(self, x: int, y: int) -> int:
        return self.of(self.elements[x] * self.elements[y])

    def neg(self, x: int) -> int:
        return self.of(-self.elements[x])

    def units(self) -> list[int]:
        """Indices of the invertible residues."""
        out = []
        for x in range(self.n):
            if any(self.mul(x, y) == self.one for y in range(self.n)):
                out.append(x)
        return out

    def square_roots_of_one(self) -> list[int]:
        return [x for x in range(self.n) if self.mul(x, x) == self.one]


# -- torus tessellations ---------------------------------------------------------


@dataclass(frozen=True)
class TorusTessellation:
    """A combinatorial regular tessellation of the torus.

    ``faces`` holds, per face, the cyclic tuple of vertex ids and the cyclic
    tuple of edge ids (edge k joins boundary vertices k and k+1). ``edges``
    holds vertex pairs.
    """

    z: QuadInt
    r: int
    dual: bool
    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    faces: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    def vertex_valences(self) -> list[int]:
        val = [0] * self.n_vertices
        for a, b in self.edges:
            val[a] += 1
            val[b] += 1
        return val

    def is_closed_surface(self) -> bool:
        """Every edge borders exactly two face sides."""
        count = [0] * self.n_edges
        for _, es in self.faces:
            for e in es:
                count[e] += 1
        return all(c == 2 for c in count)


def torus(z: QuadInt, r: int, dual: bool) -> TorusTessellation:
    """T_z (dual=False) or its dual T*_z (dual=True) for the lattice Z[u].

    r = 6 needs an Eisenstein z (T_z has triangles, T*_z hexagons); r = 4 a
    Gaussian z (squares both ways).
    """
    _require_nonzero(z)
    if Kind.from_r(r) is not z.kind:
        raise ValueError(f"r={r} is inconsistent with the {z.kind.value} integers")
    ring = ResidueRing(z)
    n = ring.n
    dirs = units(z.kind)
    half = r // 2

    # corners: the q-gon of T_z spanned by directions c, c+1 at lattice point w.
    # Each q-gon is reached from q of its vertices; number them once.
    q = 3 if r == 6 else 4
    corner_id: dict[tuple[int, int], int] = {}
    n_corners = 0
    for w in range(n):
        for c in range(r):
            if (w, c) in corner_id:
                continue
            # walk around the q-gon to find all (vertex, corner) names for it
            names = []
            pt, cc = ring.elements[w], c
            for _ in range(q):
                names.append((ring.of(pt), cc))
                pt = pt + dirs[cc % r]
                # at the next vertex the polygon sits just before the way back
                cc = (cc + half - 1) % r
            for nm in names:
                corner_id[nm] = n_corners
            n_corners += 1

    edge_id: dict[tuple[int, int], int] = {}
    lattice_edges: list[tuple[int, int]] = []
    edge_dir: list[tuple[int, int]] = []
    for w in range(n):
        for k in range(half):
            other = ring.of(ring.elements[w] + dirs[k])
            eid = len(lattice_edges)
            lattice_edges.append((w, other))
            edge_dir.append((w, k))
            edge_id[(w, k)] = eid
            edge_id[(other, k + half)] = eid

    if not dual:
        # faces are the q-gons; vertices the lattice points
        faces = []
        seen = set()
        for w in range(n):
            for c in range(r):
                cid = corner_id[(w, c)]
                if cid in seen:
                    continue
                seen.add(cid)
                verts, es = [], []
                pt, cc = ring.elements[w], c
                for _ in range(q):
                    v = ring.of(pt)
                    verts.append(v)
                    es.append(edge_id[(v, cc % r)])
                    pt = pt + dirs[cc % r]
                    cc = (cc + half - 1) % r
                faces.append((tuple(verts), tuple(es)))
        return TorusTessellation(z, r, False, n, tuple(lattice_edges), tuple(faces))

    # dual: r-gons centred at lattice points; vertices are corners; the dual
    # edge crossing lattice edge (w, k) joins corners (w, k-1) and (w, k)
    dual_edges = [(corner_id[(w, (k - 1) % r)], corner_id[(w, k)]) for w, k in edge_dir]
    faces = []
    for w in range(n):
        verts = tuple(corner_id[(w, c)] for c in range(r))
        # edge between corner c-1 and c crosses direction c; list edge j between verts j, j+1
        es = tuple(edge_id[(w, (c + 1) % r)] for c in range(r))
        faces.append((verts, es))
    return TorusTessellation(z, r, True, n_corners, tuple(dual_edges), tuple(faces))
