import random

import pytest

from kbhomology.bracket import DELTA, kauffman_f
from kbhomology.catalog import builtin
from kbhomology.diagram import orient
from kbhomology.framedcube import build_framed_complex, framed_homology
from kbhomology.intlinalg import QuotientStructure
from kbhomology.laurent import LaurentPoly, PoincarePoly
from kbhomology.moves import Move, apply_move, random_move
from kbhomology.oriented import (
    TABULATED_FKH_5_1,
    euler_consistency,
    mod4_vanishing_check,
    odd_vanishing_check,
    oriented_complex,
    oriented_homology,
    poincare_framed,
    poincare_oriented,
    tabulated_note,
)
from kbhomology.twocomplex import euler_char, homology, reflex, shift

from conftest import SMALL_NAMES, random_braids

Z = QuotientStructure(1)


def test_writhe_zero_is_framed_complex():
    od = builtin("unknot")
    assert oriented_complex(od) == build_framed_complex(od.diagram)


def test_positive_curl_complex():
    od = apply_move(builtin("unknot"), Move.R1_PLUS, 1)
    want = shift(reflex(build_framed_complex(od.diagram)), -3)
    assert oriented_complex(od) == want


def test_curl_homology_matches_unknot():
    u = builtin("unknot")
    assert oriented_homology(u).as_dict() == {(1, -2): Z, (1, 2): Z}
    for move in (Move.R1_PLUS, Move.R1_MINUS):
        assert oriented_homology(apply_move(u, move, 1)) == oriented_homology(u)


@pytest.mark.parametrize("name", SMALL_NAMES)
def test_catalog_properties(name):
    od = builtin(name)
    x = oriented_complex(od)
    assert euler_char(x) == kauffman_f(od)
    h = oriented_homology(od)
    assert h == homology(x)
    assert h.euler_char() == kauffman_f(od)
    assert h == framed_homology(od.diagram).reflex(od.writhe).shift(-3 * od.writhe)
    assert odd_vanishing_check(od)
    assert mod4_vanishing_check(od, h)


def test_trefoil_support(trefoil):
    h = oriented_homology(orient(trefoil))
    assert sorted({j for (_, j), _ in h}) == [-18, -14, -10, -6, -2]


def test_hopf_support():
    h = oriented_homology(builtin("hopf_plus"))
    assert h and all(j % 4 == 0 for (_, j), _ in h)


@pytest.mark.parametrize("od", random_braids(15, 7, seed=9), ids=lambda od: od.to_pd())
def test_random_vanishing(od):
    assert odd_vanishing_check(od)
    assert mod4_vanishing_check(od)


@pytest.mark.parametrize("move", [Move.R1_PLUS, Move.R1_MINUS, Move.R2, Move.R3])
def test_oriented_invariance(move):
    rng = random.Random(77)
    checked = 0
    for od in random_braids(40, 7, seed=55):
        new = random_move(rng, od, move)
        if new is None:
            continue
        assert oriented_homology(new) == oriented_homology(od)
        checked += 1
    assert checked >= 10


def test_poincare_polynomials():
    u = builtin("unknot")
    assert poincare_framed(u.diagram) == PoincarePoly({(1, -2): 1, (1, 2): 1})
    assert poincare_oriented(u) == poincare_framed(u.diagram)


def test_euler_consistency_detects_tabulated_typo():
    f_hat = kauffman_f(builtin("k5_1"))
    assert f_hat == LaurentPoly({30: 1, 14: -1, 10: -1, 6: -1})
    assert f_hat == LaurentPoly({28: -1, 24: 1, 20: -1, 16: 1, 8: 1}) * DELTA
    assert not euler_consistency(TABULATED_FKH_5_1, f_hat)
    fixed = PoincarePoly({(0, 30): 1, (0, 22): 1, (1, 22): 1, (1, 14): 1, (1, 10): 1, (1, 6): 1})
    assert euler_consistency(fixed, f_hat)


def test_tabulated_note():
    f_hat = LaurentPoly({30: 1, 14: -1, 10: -1, 6: -1})
    computed = PoincarePoly({(0, 30): 1, (0, 22): 1, (1, 22): 1, (1, 14): 1, (1, 10): 1, (1, 6): 1})
    note = tabulated_note("k5_1_framed0", computed, f_hat)
    assert note["kind"] == "tabulated_value_inconsistent"
    assert note["tabulated_consistent"] is False
    assert note["computed_consistent"] is True
    assert tabulated_note("trefoil_right", computed, f_hat) is None
