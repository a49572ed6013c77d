import json
import random
from fractions import Fraction as F

import pytest

from lamkit.core import Chord, ChordSet, ClassLamination, PolygonClass, chords_cross
from lamkit.fdl import canonical_form
from lamkit.io import (
    BFile,
    DocumentError,
    dumps,
    export_dot_gengraph,
    export_dot_tree,
    load_chordset,
    load_lamination,
    oeis_compare,
    parse_bfile,
    render_svg,
    save_lamination,
    write_atomic,
)
from lamkit.paramgraph import generational_graph


def test_load_rabbit_document():
    lam = load_lamination('{"degree": 2, "classes": [["_001", "_010", "_100"]]}')
    assert canonical_form(lam) == "2|1/7,2/7,4/7"


def test_load_cubic_pair():
    doc = {
        "degree": 3,
        "classes": [["_001", "_010", "_100"], ["_112", "_121", "_211"]],
    }
    lam = load_lamination(json.dumps(doc))
    assert canonical_form(lam) == "3|1/26,3/26,9/26|7/13,8/13,11/13"


@pytest.mark.parametrize(
    "doc",
    [
        "not json at all {",
        '{"classes": [["1/7","2/7"]]}',
        '{"degree": 1, "classes": []}',
        '{"degree": 2, "classes": [["1/7"]]}',
        '{"degree": 2, "classes": [["1/7", "bogus"]]}',
        '{"degree": 2, "classes": [["0", "1/2"], ["1/4", "3/4"]]}',
        '{"degree": 2}',
    ],
)
def test_load_rejects(doc):
    with pytest.raises(DocumentError):
        load_lamination(doc)


def test_save_load_round_trip_randomized(rabbit_tree):
    rng = random.Random(5)
    corpus = [n.lamination for n in rabbit_tree.all_nodes()]
    # plus random non-crossing leaf collections
    for _ in range(100):
        classes = []
        used = set()
        for _ in range(rng.randrange(0, 4)):
            den = rng.choice([8, 12, 20, 28])
            a, b = F(rng.randrange(den), den), F(rng.randrange(den), den)
            if a == b or used & {a, b}:
                continue
            cand = PolygonClass((a, b))
            if any(
                chords_cross(e, o) for e in cand.edges() for c in classes for o in c.edges()
            ):
                continue
            classes.append(cand)
            used |= {a, b}
        corpus.append(ClassLamination.create(2, classes))
    for lam in corpus:
        if not lam.classes:
            continue
        doc = save_lamination(lam)
        back = load_lamination(json.dumps(doc))
        assert canonical_form(back) == canonical_form(lam)
        assert save_lamination(back) == doc


def test_load_chordset_supports_both_schemas():
    via_classes = load_chordset('{"degree": 2, "classes": [["_001", "_010", "_100"]]}')
    assert len(via_classes.chords) == 3
    via_chords = load_chordset(
        '{"degree": 2, "chords": [["0", "1/4"], ["0", "3/4"]]}'
    )
    assert len(via_chords.chords) == 2  # wedges allowed


def test_dot_exports_deterministic(rabbit_tree):
    a = export_dot_tree(rabbit_tree)
    b = export_dot_tree(rabbit_tree)
    assert a == b
    assert a.count("->") == sum(rabbit_tree.level_counts()) - 1
    g = generational_graph(rabbit_tree, 4)
    dot = export_dot_gengraph(g)
    assert dot == export_dot_gengraph(g)
    assert dot.count("rank=same") == 2  # trapped 0 and trapped 1


def test_render_svg_straight_and_arc(rabbit_tree):
    lam = rabbit_tree.levels[4][0].lamination
    for geodesics in ("straight", "arc"):
        svg = render_svg(lam, geodesics=geodesics)
        assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
        assert svg.count("<path") == len(lam.all_edges())


def test_render_svg_handles_wedges_and_tiny_chords():
    cs = ChordSet.create(
        2,
        [
            Chord(F(0), F(1, 4)),
            Chord(F(0), F(3, 4)),
            Chord(F(1, 2), F(1, 2) + F(1, 10**9)),
            Chord(F(1, 4), F(3, 4)),  # diameter stays straight in arc mode
        ],
    )
    svg = render_svg(cs, geodesics="arc")
    assert svg.count("<path") == 4


def test_render_svg_empty():
    svg = render_svg(ClassLamination.create(2, []))
    assert "<circle" in svg and "<path" not in svg


def test_render_svg_deterministic(rabbit_tree):
    lam = rabbit_tree.levels[5][0].lamination
    assert render_svg(lam, geodesics="arc") == render_svg(lam, geodesics="arc")


def test_write_atomic(tmp_path):
    path = tmp_path / "out.txt"
    write_atomic(str(path), "hello\n")
    assert path.read_text() == "hello\n"
    leftovers = [p for p in tmp_path.iterdir() if p.name != "out.txt"]
    assert not leftovers


def test_parse_bfile():
    bf = parse_bfile("# header\n0 1\n1 1\n\n2 3 # tail comment\n")
    assert bf.entries == ((0, 1), (1, 1), (2, 3))
    with pytest.raises(DocumentError):
        parse_bfile("0 1\n0 2\n")
    with pytest.raises(DocumentError):
        parse_bfile("0 1 2\n")


def test_oeis_compare():
    bf = parse_bfile("0 1\n1 1\n2 1\n3 3\n4 5\n")
    ok = oeis_compare([1, 1, 1, 3, 5], bf)
    assert ok["verdict"] == "consistent with conjecture up to depth 4"
    assert ok["first_mismatch"] is None
    bad = oeis_compare([1, 2], parse_bfile("1 1\n2 3\n"))
    assert bad["verdict"] == "mismatch at index 2"
    longer = oeis_compare([1, 1, 1], parse_bfile("0 1\n"))
    assert longer["compared"] == 1
