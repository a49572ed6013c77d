"""Trapped criticality and the generational graph of one tree level.

At rabbit level 4 three placements keep the criticality free in a round
gap (trapped 0) and one traps it inside a hexagon (trapped 1); each
trapped-0 node refines the hexagon node, and the transitive closure of the
graph recovers the trapped-monotone refinement relation.
"""

import os
from fractions import Fraction as F

from lamkit import PolygonClass, build_pullback_tree
from lamkit.fdl import root_fdl
from lamkit.io import export_dot_gengraph, write_atomic
from lamkit.paramgraph import (
    closure_is_refinement,
    criticality,
    generational_graph,
)

HERE = os.path.dirname(os.path.abspath(__file__))

root = root_fdl(2, [PolygonClass((F(1, 7), F(2, 7), F(4, 7)))])
tree = build_pullback_tree(root, 5)

for level in (4, 5):
    graph = generational_graph(tree, level)
    print(f"level {level}: {len(graph.vertices)} vertices, {len(graph.edges)} edges")
    for key in graph.vertices:
        rec = criticality(graph.nodes[key])
        print(f"  trapped {rec.trapped}, free {rec.free}: {key[:48]}...")
    print(f"  closure equals refinement: {closure_is_refinement(graph)}")
    print()

dot_path = os.path.join(HERE, "rabbit_gengraph_level5.dot")
write_atomic(dot_path, export_dot_gengraph(generational_graph(tree, 5)))
print(f"wrote {dot_path}")
