"""Watch {5,3,6} with cusp modulus 2+zeta grow until the budget stops it."""
from tessellar.lattice import QuadInt
from tessellar.nanotube import TessType
from tessellar.universal import boundary, cluster_report, initial_state, step, Status

t = TessType(5, 3, 6)
state = initial_state(t, QuadInt.parse("2+1z"), max_simplices=100_000)
while state.status is Status.IN_PROGRESS:
    step(state)
    if state.status is not Status.IN_PROGRESS:
        break
    surf = boundary(state)
    sizes = sorted({r["size"] for r in cluster_report(surf, t.q)})
    print(f"iteration {state.iteration}: +{state.growth[-1]} simplices, "
          f"{len(surf.rgons)} open hexagons, cluster sizes {sizes}")
print(f"{state.status.value}: growth {state.growth}")
