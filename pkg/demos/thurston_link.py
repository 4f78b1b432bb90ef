"""Build N^{3,3,6}_{2+zeta}, the 28-tetrahedron tessellation, and look at it from a few sides."""
from tessellar.complex import cusp_count, is_manifold
from tessellar.export import write_presentation
from tessellar.homology import h1, is_homology_link_complement
from tessellar.lattice import QuadInt
from tessellar.nanotube import TessType
from tessellar.universal import build_universal, group_order

t = TessType(3, 3, 6)
z = QuadInt.parse("2+1z")

state = build_universal(t, z)
c = state.complex
print(f"status {state.status.value} after {state.iteration} iterations, growth {state.growth}")
print(f"{len(c)} simplices = {state.solids()} tetrahedra, {cusp_count(c)} cusps, manifold: {is_manifold(c, t)}")

# orientation-preserving symmetries act simply transitively on positive simplices
print(f"symmetry group order {group_order(c)}")

h = h1(c)
print(f"H1 = {h}; homology link complement: {is_homology_link_complement(c, h)}")
print(write_presentation(t, z))
