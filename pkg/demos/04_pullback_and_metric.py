"""Chord pullback along critical chords, the metric, and properness scans.

Pulling the rabbit triangle back through the diameter (1/7, 9/14) grows a
nested sequence of chord sets; distances between consecutive levels shrink
and stay below the longest new leaf.  Forcing the chord endpoint onto the
preperiodic angle 15/112 piles three leaves onto one point, the unclean
configuration.
"""

import os
from fractions import Fraction as F

from lamkit import (
    Chord,
    ChordSet,
    ClassLamination,
    CriticalChordSet,
    PolygonClass,
    lamination_distance,
    place_critical_chords,
    properness_report,
    pullback_lamination,
    render_svg,
)
from lamkit.io import write_atomic

HERE = os.path.dirname(os.path.abspath(__file__))

rabbit = ClassLamination.create(2, [PolygonClass((F(1, 7), F(2, 7), F(4, 7)))])
level1 = ClassLamination.create(
    2,
    [
        PolygonClass((F(1, 7), F(2, 7), F(4, 7))),
        PolygonClass((F(1, 14), F(9, 14), F(11, 14))),
    ],
)

print("canonical critical chord for the completed rabbit:",
      [str(c) for c in place_critical_chords(level1)[0].chords])

crit = CriticalChordSet.create(2, [Chord(F(1, 7), F(9, 14))])
seq = pullback_lamination(rabbit, crit, 8)
print("chords per level:", seq.counts())

print()
print("distances between consecutive levels (exact):")
for k in range(4):
    d = lamination_distance(seq.levels[k], seq.levels[k + 1])
    new = seq.levels[k + 1].chords - seq.levels[k].chords
    bound = max(c.length() for c in new)
    print(f"  d(level {k}, level {k + 1}) = {d}  <=  longest new leaf {bound}")

svg_path = os.path.join(HERE, "rabbit_pullback_depth8.svg")
write_atomic(svg_path, render_svg(seq.levels, geodesics="arc"))
print(f"\nwrote {svg_path}")

print()
print("forcing a leaf at 0010_001 = 15/112:")
forced = F(15, 112)
crit2 = CriticalChordSet.create(2, [Chord(forced, forced + F(1, 2))])
seq2 = pullback_lamination(rabbit, crit2, 8)
with_chord = ChordSet(2, seq2.levels[8].chords | set(crit2.chords))
rep = properness_report(with_chord)
for point, count in rep.unclean_points:
    print(f"  unclean point {point}: {count} leaves meet")
