"""The rabbit pullback tree: levels, audits, and exports.

Starting from the period-3 triangle {1/7, 2/7, 4/7}, every level adds a
sibling portrait over the preimages of the deepest classes.  The first
choice appears at level 4, where the preimage points fall inside the
critical gap and all four portraits of a triangle fit.
"""

import os
from fractions import Fraction as F

from lamkit import (
    PolygonClass,
    build_pullback_tree,
    criticality_audit,
    render_svg,
)
from lamkit.fdl import root_fdl
from lamkit.io import export_dot_tree, write_atomic

HERE = os.path.dirname(os.path.abspath(__file__))

root = root_fdl(2, [PolygonClass((F(1, 7), F(2, 7), F(4, 7)))])
tree = build_pullback_tree(root, 5)
print("level counts:", tree.level_counts())

print()
print("levels 0-2 are forced:")
for lv in range(3):
    for node in tree.levels[lv]:
        print(f"  level {lv}: {node.key()}")

print()
print("level 4 is the first branch point:")
for node in tree.levels[4]:
    audit = criticality_audit(node.lamination)
    degrees = sorted(e.status.degree for e in audit.entries)
    print(f"  {len(node.lamination.classes):>2} classes, gap+class degrees {degrees}")

print()
print("the excess-degree identity holds on every level >= 1 node:")
for lv in range(1, 6):
    oks = [criticality_audit(n.lamination).passed for n in tree.levels[lv]]
    print(f"  level {lv}: {sum(oks)}/{len(oks)} pass")

dot_path = os.path.join(HERE, "rabbit_tree.dot")
write_atomic(dot_path, export_dot_tree(tree))
svg_path = os.path.join(HERE, "rabbit_level5.svg")
write_atomic(svg_path, render_svg(tree.levels[5][0].lamination, geodesics="arc"))
print()
print(f"wrote {dot_path}")
print(f"wrote {svg_path}")
