"""
Boundaried graphs that look the same from outside
=================================================

Two graphs sharing a labelled boundary are interchangeable for
minor-deletion purposes when they have the same folio: the set of small
labelled minors they contain. Here we glue, compare and see where the
resolution parameter ``h`` starts to matter.
"""

# %%
from fdeletion import BoundariedGraph, equivalent_h, folio, glue
from fdeletion.graph import WeightedGraph, path_graph
from fdeletion.minors import has_minor

# %%
# Two boundaried paths joining the same pair of terminals, one with a
# single interior vertex and one with two.
short = BoundariedGraph(path_graph(3), (1, 3))
long = BoundariedGraph(path_graph(4), (1, 4))
for h in (1, 2, 3):
    print(f"h={h}: |folio| {len(folio(short, h))} vs {len(folio(long, h))},"
          f" equivalent {equivalent_h(short, long, h)}")

# %%
# Gluing identifies boundary vertices by label, and the two boundaries
# must induce the same graph. Closing each path with another two-edge path
# gives a 4-cycle and a 5-cycle. Both contain a triangle minor, so at low
# resolution they behave alike.
closer = BoundariedGraph(path_graph(3, start=10), (10, 12))
ring4 = glue(short, closer)
ring5 = glue(long, closer)
k3 = WeightedGraph([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
print("triangle minor:", has_minor(ring4, k3), has_minor(ring5, k3))

# %%
# A 5-cycle pattern tells them apart, which is what the larger folio sees.
c5 = WeightedGraph(range(5), [(i, (i + 1) % 5) for i in range(5)])
print("5-cycle minor:", has_minor(ring4, c5), has_minor(ring5, c5))
