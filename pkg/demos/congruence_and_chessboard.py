"""Principal congruence manifolds for D = -3, z = 2, and the chessboard model of N^{3,3,6}_{2+2zeta}."""
from tessellar.complex import are_isomorphic, cusp_count, is_manifold
from tessellar.congruence import build_congruence
from tessellar.export import build_chessboard, chessboard_counts
from tessellar.lattice import QuadInt
from tessellar.nanotube import TessType
from tessellar.universal import build_universal

t = TessType(3, 3, 6)
two = QuadInt.parse("2", t.kind)
for variant in ("pslbar", "psl", "pgl"):
    c = build_congruence(t, two, variant).complex
    manifold = is_manifold(c, t)
    cusps = f", {cusp_count(c)} cusps" if manifold else ""
    print(f"{variant}(-3, 2): {len(c)} simplices, manifold: {manifold}{cusps}")

for m, n in ((2, 3), (3, 4), (4, 5)):
    print(f"{m}x{n} chessboard complex f-vector {chessboard_counts(m, n)}")

board = build_chessboard(4, 5)
universal = build_universal(t, QuadInt.parse("2+2z")).complex
# the board squares are the cusps, so vertex labels are reversed
print("subdivided 4x5 board is N^{3,3,6}_{2+2zeta}:",
      are_isomorphic(board, universal, label_map=(3, 2, 1, 0)))
