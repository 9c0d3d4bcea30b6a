import random

import pytest

from kbhomology.bracket import DELTA, kauffman_bracket, kauffman_f, skein_bracket, unnormalized_bracket
from kbhomology.catalog import builtin
from kbhomology.diagram import LinkDiagram, disjoint_union, mirror, parse_pd, reorder, smooth
from kbhomology.errors import EmptyDiagram
from kbhomology.laurent import LaurentPoly
from kbhomology.moves import Move, apply_move, move_sites

from conftest import SMALL_NAMES, random_braids

HEADLINE = LaurentPoly({28: -1, 24: 1, 20: -1, 16: 1, 8: 1})
UNKNOT = parse_pd("PD[O(1)]")


def test_unknot_bracket():
    assert kauffman_bracket(UNKNOT) == LaurentPoly.one()
    assert unnormalized_bracket(UNKNOT) == LaurentPoly({2: -1, -2: -1})


def test_unlink_bracket():
    assert kauffman_bracket(parse_pd("PD[O(1), O(2)]")) == LaurentPoly({2: -1, -2: -1})


def test_empty_diagram():
    with pytest.raises(EmptyDiagram):
        kauffman_bracket(LinkDiagram(()))
    assert unnormalized_bracket(LinkDiagram(())) == LaurentPoly.one()


def test_trefoil_bracket(trefoil):
    assert kauffman_bracket(trefoil) == LaurentPoly({5: -1, -3: -1, -7: 1})
    assert kauffman_bracket(mirror(trefoil)) == kauffman_bracket(trefoil).substitute(-1)


@pytest.mark.parametrize("name", ["k5_1_framed0", "k10_132_framed0"])
def test_headline_brackets(name):
    assert kauffman_bracket(builtin(name).diagram) == HEADLINE


def test_headline_f_value():
    # the bracket above times (-A^2 - A^-2), expanded independently
    od = builtin("k10_132_framed0")
    want = LaurentPoly({30: 1, 14: -1, 10: -1, 6: -1})
    assert HEADLINE * DELTA == want
    assert kauffman_f(od) == want


def test_kauffman_f_unknot_and_curl():
    od = builtin("unknot")
    assert kauffman_f(od) == DELTA
    assert kauffman_f(apply_move(od, Move.R1_PLUS, 1)) == DELTA
    assert kauffman_f(apply_move(od, Move.R1_MINUS, 1)) == DELTA


def test_union_with_unknot_multiplies_by_delta(trefoil):
    assert unnormalized_bracket(disjoint_union(trefoil, UNKNOT)) == unnormalized_bracket(trefoil) * DELTA


@pytest.mark.parametrize("od", random_braids(25, 8, seed=5), ids=lambda od: od.to_pd())
def test_skein_oracle_agrees(od):
    assert skein_bracket(od.diagram) == unnormalized_bracket(od.diagram)


@pytest.mark.parametrize("name", SMALL_NAMES)
def test_crossing_skein_relation(name):
    d = builtin(name).diagram
    for c in range(d.n):
        da, _ = smooth(d, c, "A")
        db, _ = smooth(d, c, "B")
        assert unnormalized_bracket(d) == unnormalized_bracket(da).shift(1) + unnormalized_bracket(db).shift(-1)


@pytest.mark.parametrize("od", random_braids(12, 6, seed=8), ids=lambda od: od.to_pd())
def test_curl_factors(od):
    d = od.diagram
    plus = -kauffman_bracket(d).shift(3)
    minus = -kauffman_bracket(d).shift(-3)
    for site in move_sites(d, Move.R1_PLUS)[:6]:
        assert kauffman_bracket(apply_move(d, Move.R1_PLUS, site)) == plus
        assert kauffman_bracket(apply_move(d, Move.R1_MINUS, site)) == minus


@pytest.mark.parametrize("move", [Move.R2, Move.R3])
def test_r2_r3_invariance(move):
    rng = random.Random(13)
    done = 0
    for od in random_braids(60, 7, seed=21):
        sites = move_sites(od, move)
        if not sites:
            continue
        new = apply_move(od, move, sites[rng.randrange(len(sites))])
        assert kauffman_bracket(new.diagram) == kauffman_bracket(od.diagram)
        assert kauffman_f(new) == kauffman_f(od)
        done += 1
    assert done >= 20


def test_f_reorder_invariant():
    od = builtin("fig8")
    assert kauffman_f(reorder(od, [2, 0, 3, 1])) == kauffman_f(od)
