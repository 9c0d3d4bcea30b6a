import random

import pytest

from kbhomology.bracket import kauffman_bracket, kauffman_f
from kbhomology.catalog import builtin
from kbhomology.diagram import from_braid, parse_pd
from kbhomology.errors import IllegalSite
from kbhomology.moves import Move, R2Site, apply_move, move_sites, random_move

from conftest import random_braids


def test_unknot_positive_curl():
    od = apply_move(builtin("unknot"), Move.R1_PLUS, 1)
    assert od.n == 1 and od.writhe == 1
    assert od.diagram.free_loops == 0


def test_unknot_negative_curl():
    od = apply_move(builtin("unknot"), Move.R1_MINUS, 1)
    assert od.writhe == -1


def test_unknot_r2():
    od = apply_move(builtin("unknot"), Move.R2, R2Site(1, None, 1, None))
    assert od.n == 2 and od.writhe == 0
    assert od.components == 1
    assert kauffman_bracket(od.diagram) == kauffman_bracket(builtin("unknot").diagram)


def test_unlink_r2_makes_two_component_diagram():
    d = parse_pd("PD[O(1), O(2)]")
    new = apply_move(d, Move.R2, R2Site(1, None, 2, None))
    assert new.n == 2 and new.components == 2
    assert new.euler_defect() == 0


def test_r3_on_four_crossing_trefoil():
    # (s1 s2)^2 closes to a trefoil and has movable triangles
    od = from_braid([1, 2, 1, 2], 3)
    sites = move_sites(od, Move.R3)
    assert sites
    for site in sites:
        new = apply_move(od, Move.R3, site)
        assert new.n == od.n and new.diagram != od.diagram
        assert kauffman_bracket(new.diagram) == kauffman_bracket(od.diagram)
        assert new.writhe == od.writhe and new.components == 1


def test_standard_trefoil_has_no_movable_triangle(trefoil):
    assert move_sites(trefoil, Move.R3) == []
    with pytest.raises(IllegalSite):
        apply_move(trefoil, Move.R3, (0, 1, 2))


def test_illegal_sites(trefoil):
    with pytest.raises(IllegalSite):
        apply_move(trefoil, Move.R1_PLUS, 99)
    with pytest.raises(IllegalSite):
        apply_move(trefoil, Move.R1_PLUS, (1, 2))
    with pytest.raises(IllegalSite):
        apply_move(trefoil, Move.R2, 3)
    with pytest.raises(IllegalSite):
        apply_move(trefoil, Move.R2, R2Site(1, (0, 0), 1, (0, 0)))


def test_r2_needs_a_common_face(trefoil):
    sites = {(s.e, s.e_start, s.f, s.f_start) for s in move_sites(trefoil, Move.R2)}
    darts = [(x[p], (c, p)) for c, x in enumerate(trefoil.crossings) for p in range(4)]
    bad = next((e, de, f, df) for e, de in darts for f, df in darts
               if e != f and (e, de, f, df) not in sites)
    with pytest.raises(IllegalSite):
        apply_move(trefoil, Move.R2, R2Site(*bad))


@pytest.mark.parametrize("move, dw", [(Move.R1_PLUS, 1), (Move.R1_MINUS, -1), (Move.R2, 0), (Move.R3, 0)])
def test_moves_keep_planarity_and_track_writhe(move, dw):
    rng = random.Random(7)
    applied = 0
    for od in random_braids(40, 7, seed=31):
        new = random_move(rng, od, move)
        if new is None:
            continue
        applied += 1
        assert new.diagram.euler_defect() == 0
        assert new.writhe == od.writhe + dw
        assert new.n == od.n + {Move.R1_PLUS: 1, Move.R1_MINUS: 1, Move.R2: 2, Move.R3: 0}[move]
        assert new.components == od.components
        assert kauffman_f(new) == kauffman_f(od)
    assert applied >= 15


def test_moves_on_unoriented_input(trefoil):
    new = apply_move(trefoil, Move.R1_PLUS, (3, 1))
    assert new.n == 4
    assert kauffman_bracket(new) == -kauffman_bracket(trefoil).shift(3)


def test_curl_on_free_loop_sides():
    u = parse_pd("PD[O(1)]")
    for side in (0, 1):
        assert apply_move(u, Move.R1_PLUS, (1, side)).n == 1
        assert apply_move(u, Move.R1_MINUS, (1, side)).n == 1


def test_move_names():
    assert Move("R1+") is Move.R1_PLUS
    assert apply_move(builtin("unknot"), "R1-", 1).writhe == -1
