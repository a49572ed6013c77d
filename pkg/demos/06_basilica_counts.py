"""Basilica level counts and the comparison harness.

The pullback tree over the period-2 leaf (1/3, 2/3) grows like a
Jacobsthal sequence: every level count from the third on satisfies
a(n) = a(n-1) + 2*a(n-2).  The harness compares the enumerated counts
against the bundled reference b-file and writes the report next to this
script.
"""

import json
import os
from fractions import Fraction as F

from lamkit import PolygonClass, build_pullback_tree
from lamkit.fdl import root_fdl
from lamkit.io import oeis_compare, parse_bfile, write_atomic

HERE = os.path.dirname(os.path.abspath(__file__))
BFILE = os.path.join(HERE, os.pardir, "data", "a152046.b.txt")

root = root_fdl(2, [PolygonClass((F(1, 3), F(2, 3)))])
tree = build_pullback_tree(root, 8)
counts = tree.level_counts()
print("basilica level counts:", counts)

print("recurrence check a(n) = a(n-1) + 2*a(n-2):")
for n in range(3, len(counts)):
    lhs, rhs = counts[n], counts[n - 1] + 2 * counts[n - 2]
    print(f"  a({n}) = {lhs}  vs  {rhs}  {'ok' if lhs == rhs else 'MISMATCH'}")

with open(BFILE) as fh:
    bfile = parse_bfile(fh.read())
report = oeis_compare(counts, bfile)
print()
for row in report["rows"]:
    mark = "ok" if row["match"] else "MISMATCH"
    print(f"  index {row['index']}: computed {row['computed']}, reference {row['reference']} {mark}")
print(report["verdict"])

out = os.path.join(HERE, "basilica_comparison.json")
write_atomic(out, json.dumps({"counts": counts, "report": report}, indent=2) + "\n")
print(f"wrote {out}")
