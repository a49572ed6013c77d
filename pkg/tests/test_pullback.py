import random
from fractions import Fraction as F

import pytest

from lamkit.core import Chord, ChordSet, ClassLamination, PolygonClass, chords_cross
from lamkit.fdl import enumerate_children
from lamkit.pullback import (
    CriticalChordSet,
    PullbackError,
    hyperbolic_approx,
    lamination_distance,
    leaf_distance,
    place_critical_chords,
    properness_report,
    pullback_lamination,
    pullback_step,
)

RABBIT = PolygonClass((F(1, 7), F(2, 7), F(4, 7)))
SIBLING = PolygonClass((F(1, 14), F(9, 14), F(11, 14)))
LEVEL1 = ClassLamination.create(2, [RABBIT, SIBLING])


def _chords(pairs):
    return {Chord(F(*a), F(*b)) for a, b in pairs}


def test_critical_chord_set_invariants():
    CriticalChordSet.create(2, [Chord(F(0), F(1, 2))])
    CriticalChordSet.create(3, [Chord(F(0), F(1, 3)), Chord(F(1, 3), F(2, 3))])
    with pytest.raises(PullbackError):
        CriticalChordSet.create(2, [Chord(F(0), F(1, 3))])  # not critical
    with pytest.raises(PullbackError):
        CriticalChordSet.create(2, [])  # wrong count
    with pytest.raises(PullbackError):  # closed loop of critical chords
        CriticalChordSet.create(
            4,
            [
                Chord(F(0), F(1, 4)),
                Chord(F(1, 4), F(1, 2)),
                Chord(F(1, 2), F(0)),
            ],
        )


def test_branches():
    cs = CriticalChordSet.create(3, [Chord(F(0), F(1, 3)), Chord(F(1, 3), F(2, 3))])
    assert cs.branches() == [
        ((F(0), F(1, 3)),),
        ((F(1, 3), F(2, 3)),),
        ((F(2, 3), F(0)),),
    ]


def test_place_critical_chords():
    canonical = place_critical_chords(LEVEL1)[0]
    assert canonical.chords == (Chord(F(1, 14), F(4, 7)),)
    all_placements = place_critical_chords(LEVEL1, enumerate_all=True)
    assert {cs.chords for cs in all_placements} == {
        (Chord(F(1, 14), F(4, 7)),),
        (Chord(F(1, 7), F(9, 14)),),
    }
    assert place_critical_chords(ClassLamination.create(2, []))[0].chords == (
        Chord(F(0), F(1, 2)),
    )
    assert place_critical_chords(ClassLamination.create(3, []))[0].chords == (
        Chord(F(0), F(1, 3)),
        Chord(F(1, 3), F(2, 3)),
    )
    with pytest.raises(PullbackError):
        place_critical_chords(ClassLamination.create(2, [RABBIT]))


def test_place_critical_chords_inside_critical_polygon():
    # the level-4 node that traps its criticality in a hexagon still admits
    # a chain, now made of the hexagon's same-fiber diagonals
    hexa = PolygonClass(tuple(F(k, 112) for k in (9, 11, 15, 65, 67, 71)))
    u2 = PolygonClass(tuple(F(k, 112) for k in (74, 78, 86)))
    u2b = PolygonClass(tuple(F(k, 112) for k in (18, 22, 30)))
    v1 = PolygonClass(tuple(F(k, 112) for k in (2, 102, 106)))
    v1b = PolygonClass(tuple(F(k, 112) for k in (46, 50, 58)))
    lam = ClassLamination.create(
        2,
        [
            PolygonClass((F(1, 7), F(2, 7), F(4, 7))),
            PolygonClass((F(1, 14), F(9, 14), F(11, 14))),
            PolygonClass(tuple(F(k, 56) for k in (9, 11, 15))),
            PolygonClass(tuple(F(k, 56) for k in (37, 39, 43))),
            PolygonClass(tuple(F(k, 56) for k in (1, 51, 53))),
            PolygonClass(tuple(F(k, 56) for k in (23, 25, 29))),
            hexa,
            u2,
            u2b,
            v1,
            v1b,
        ],
    )
    placement = place_critical_chords(lam)[0]
    (chord,) = placement.chords
    assert {chord.a, chord.b} <= set(hexa.vertices)
    assert chord.is_critical(2)


def test_pullback_step_seven_chord_oracle():
    crit = CriticalChordSet.create(2, [Chord(F(1, 7), F(9, 14))])
    start = ClassLamination.create(2, [RABBIT]).as_chordset()
    out = pullback_step(start, crit)
    expected = _chords(
        [
            ((1, 14), (1, 7)),
            ((1, 7), (2, 7)),
            ((2, 7), (4, 7)),
            ((4, 7), (9, 14)),
            ((9, 14), (11, 14)),
            ((11, 14), (1, 14)),
            ((4, 7), (1, 7)),
        ]
    )
    assert set(out.chords) == expected


def test_pullback_step_rejects_crossing():
    crit = CriticalChordSet.create(2, [Chord(F(1, 8), F(5, 8))])
    bad = ChordSet.create(2, [Chord(F(0), F(1, 2))])
    with pytest.raises(PullbackError):
        pullback_step(bad, crit)


def test_pullback_empty_start():
    crit = CriticalChordSet.create(2, [Chord(F(0), F(1, 2))])
    out = pullback_step(ChordSet.create(2, []), crit)
    assert not out.chords


def test_pullback_of_the_critical_chord_itself():
    # the critical chord may sit in the set being pulled back; its lifts
    # share endpoints with the cut points but never cross anything
    crit = CriticalChordSet.create(2, [Chord(F(0), F(1, 2))])
    out = pullback_step(ChordSet.create(2, [Chord(F(0), F(1, 2))]), crit)
    ChordSet.create(2, out.chords)
    assert Chord(F(0), F(1, 2)) in out.chords
    for c in out.chords:
        img = c.image(2)
        assert img is None or img == Chord(F(0), F(1, 2))


def test_pullback_levels_nest_and_map_down():
    crit = CriticalChordSet.create(2, [Chord(F(1, 7), F(9, 14))])
    start = ClassLamination.create(2, [RABBIT])
    seq = pullback_lamination(start, crit, 4)
    assert seq.counts() == [3, 7, 15, 31, 63]
    for prev, nxt in zip(seq.levels, seq.levels[1:]):
        assert prev.chords <= nxt.chords
        ChordSet.create(2, nxt.chords)  # non-crossing
        for c in nxt.chords - prev.chords:
            img = c.image(2)
            assert img is None or img in prev.chords


def test_pullback_degree3(cubic_tree):
    lvl1 = cubic_tree.levels[1][0].lamination
    placements = place_critical_chords(lvl1)
    crit = placements[0]
    assert len(crit.chords) == 2 and len(crit.branches()) == 3
    seq = pullback_lamination(lvl1, crit, 3)
    for prev, nxt in zip(seq.levels, seq.levels[1:]):
        assert prev.chords <= nxt.chords
        ChordSet.create(3, nxt.chords)  # non-crossing
        for c in nxt.chords - prev.chords:
            img = c.image(3)
            assert img is None or img in prev.chords


def test_leaf_distance_pairings():
    assert leaf_distance(Chord(F(0), F(1, 2)), Chord(F(1, 10), F(1, 2))) == F(1, 10)
    assert leaf_distance(Chord(F(0), F(1, 2)), Chord(F(0), F(1, 2))) == 0


def test_lamination_distance_examples():
    empty = ChordSet.create(2, [])
    one = ChordSet.create(2, [Chord(F(0), F(1, 10))])
    assert lamination_distance(empty, one) == F(1, 10)
    a = ChordSet.create(2, [Chord(F(0), F(1, 2))])
    b = ChordSet.create(2, [Chord(F(1, 10), F(1, 2))])
    assert lamination_distance(a, b) == F(1, 10)
    assert lamination_distance(a, a) == 0


def _random_chordset(rng, d=2, max_chords=5, den=24):
    chords = []
    for _ in range(rng.randrange(0, max_chords + 1)):
        a = F(rng.randrange(den), den)
        b = F(rng.randrange(den), den)
        if a == b:
            continue
        c = Chord(a, b)
        if any(chords_cross(c, o) for o in chords):
            continue
        chords.append(c)
    return ChordSet.create(d, chords)


def test_metric_axioms_random():
    rng = random.Random(99)
    for _ in range(120):
        a, b, c = (_random_chordset(rng) for _ in range(3))
        dab = lamination_distance(a, b)
        assert dab == lamination_distance(b, a)
        assert dab <= F(1, 2)
        if set(a.chords) == set(b.chords):
            assert dab == 0
        else:
            assert dab >= 0
        assert lamination_distance(a, c) <= dab + lamination_distance(b, c)


def test_properness_clean_fdl():
    rep = properness_report(LEVEL1.as_chordset())
    assert rep.proper_so_far
    assert not rep.unclean_points
    assert not rep.period_mismatch_leaves


def test_properness_wedge_at_fixed_point():
    wedge = ChordSet.create(2, [Chord(F(0), F(1, 4)), Chord(F(0), F(3, 4))])
    rep = properness_report(wedge)
    assert len(rep.critical_wedges_with_periodic_vertex) == 1
    v, c1, c2 = rep.critical_wedges_with_periodic_vertex[0]
    assert v == 0


def test_properness_critical_leaf_with_periodic_endpoint():
    s = ChordSet.create(2, [Chord(F(1, 3), F(5, 6))])
    rep = properness_report(s)
    assert rep.critical_leaves_with_periodic_endpoint == [Chord(F(1, 3), F(5, 6))]
    assert not rep.proper_so_far


def test_forced_leaf_construction_unclean():
    p = F(15, 112)
    crit = CriticalChordSet.create(2, [Chord(p, p + F(1, 2))])
    start = ClassLamination.create(2, [RABBIT])
    seq = pullback_lamination(start, crit, 6)
    with_chord = ChordSet(2, seq.levels[6].chords | set(crit.chords))
    rep = properness_report(with_chord)
    assert (p, 3) in rep.unclean_points


def test_hyperbolic_approx_depth0(rabbit_tree):
    lvl1 = rabbit_tree.levels[1][0]
    report = hyperbolic_approx(lvl1, 0)
    assert report.nested and len(report.steps) == 1


def test_hyperbolic_approx_rabbit(rabbit_tree):
    lvl1 = rabbit_tree.levels[1][0]
    report = hyperbolic_approx(lvl1, 3)
    assert report.nested
    assert [s.fdl.depth_n for s in report.steps] == [1, 2, 3, 4]
    assert report.arc_counts == [[2], [2], [2], [4]]
    # the tracked gap stays degree 2 at every step
    from lamkit.core import gap_degree

    for step in report.steps:
        (gap,) = step.tracked
        assert gap_degree(gap, 2).degree == 2


def test_hyperbolic_approx_degree3():
    from lamkit.core import gap_degree
    from lamkit.fdl import root_fdl

    root = root_fdl(3, [PolygonClass((F(1, 8), F(3, 8)))])
    start = next(
        k
        for k in enumerate_children(root)
        if k.key() == "3|1/24,19/24|1/8,3/8|11/24,17/24"
    )
    report = hyperbolic_approx(start, 2)
    assert report.nested
    for step in report.steps:
        (gap,) = step.tracked
        assert gap_degree(gap, 3).degree == 3


def test_hyperbolic_approx_needs_critical_gap(rabbit_root):
    with pytest.raises(PullbackError):
        hyperbolic_approx(rabbit_root, 1)  # partly critical gap at the root
