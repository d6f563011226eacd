"""
Protrusions that every modulator must touch
===========================================

A treewidth modulator is a vertex set whose removal leaves a graph of
treewidth at most ``eta``. This walk-through builds the family of small
protrusions on a noisy grid and checks, by brute force, that every minimal
modulator meets at least one of them.
"""

# %%
# A 3x3 grid has treewidth 3; one chord pushes it a little further from
# being a forest of small pieces.
from fdeletion import build_hitting_family, treewidth_exact
from fdeletion.graph import WeightedGraph, boundary, grid_graph
from fdeletion.harness.oracles import all_modulators, verify_hitting_family
from fdeletion.separations import protrusion_bound

grid = grid_graph(3, 3)
g = WeightedGraph(grid.vertices, list(grid.edges) + [(grid.vertices[0], grid.vertices[-1])])
print("n =", g.n, " m =", len(g.edges), " tw =", treewidth_exact(g)[0])

# %%
# Build the family for eta = 1 and look at its members. Each one is
# ``C | S`` for a separation whose separator ``S`` is small.
eta = 1
fam = build_hitting_family(g, eta)
print(len(fam), "members")
for sep in fam.separations[:6]:
    print(f"  {sep.kind:<11} C={sorted(sep.C)}  S={sorted(sep.S)}")

# %%
# Every member is a protrusion: small boundary, small treewidth inside.
r = protrusion_bound(eta)
worst_b = max(len(boundary(g, p)) for p in fam.protrusions)
worst_tw = max(treewidth_exact(g.induced(p))[0] for p in fam.protrusions)
print(f"bound {r}: largest boundary {worst_b}, largest inner treewidth {worst_tw}")

# %%
# The point of the family: no minimal modulator avoids it. The fraction
# below is the worst case over all minimal modulators.
mods = all_modulators(g, eta)
ok, frac = verify_hitting_family(g, eta, fam)
print(len(mods), "minimal modulators; every one hit:", ok, " worst fraction hit:", frac)
