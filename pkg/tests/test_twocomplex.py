import random

import numpy as np
import pytest

from kbhomology.catalog import builtin
from kbhomology.diagram import LinkDiagram, all_a_circles, disjoint_union, parse_pd, state_circles
from kbhomology.errors import NotAComplex
from kbhomology.framedcube import build_framed_complex
from kbhomology.intlinalg import QuotientStructure, SparseIntMatrix
from kbhomology.laurent import LaurentPoly
from kbhomology.twocomplex import (
    ChainMap,
    GradedBasis,
    GradedHomology,
    TwoComplex,
    direct_sum,
    euler_char,
    homology,
    is_chain_map,
    reflex,
    shift,
    tensor,
    unit_complex,
    verify_complex,
    zero_complex,
)

from conftest import CURL_PD, TREFOIL_PD

M = SparseIntMatrix.from_dense


def one_one(d0, d1):
    z = GradedBasis([0])
    return TwoComplex(z, z, M([[d0]]), M([[d1]]))


def unknot_w():
    return TwoComplex(GradedBasis(), GradedBasis([-2, 2]), SparseIntMatrix(2, 0), SparseIntMatrix(0, 2))


def random_complex(rng: random.Random, size=3):
    """``Z^a -> Z^b -> Z^a`` with ``D1 = 0`` and random degree-preserving ``D0``."""
    degs0 = [rng.choice((-2, 0, 2)) for _ in range(rng.randint(0, size))]
    degs1 = [rng.choice((-2, 0, 2)) for _ in range(rng.randint(0, size))]
    entries = {}
    for c, dc in enumerate(degs0):
        for r, dr in enumerate(degs1):
            if dr == dc and rng.random() < 0.6:
                entries[(r, c)] = rng.choice((-2, -1, 1, 2, 3))
    d0 = SparseIntMatrix.from_entries(len(degs1), len(degs0), entries)
    return TwoComplex(GradedBasis(degs0), GradedBasis(degs1), d0, SparseIntMatrix(len(degs0), len(degs1)))


def test_verify_examples(trefoil):
    assert verify_complex(one_one(1, 0))
    assert not verify_complex(one_one(1, 1))
    assert verify_complex(build_framed_complex(trefoil))


def test_verify_rejects_degree_shift():
    x = TwoComplex(GradedBasis([0]), GradedBasis([2]), M([[1]]), M([[0]]))
    assert not verify_complex(x)


def test_shape_is_validated():
    with pytest.raises(ValueError):
        TwoComplex(GradedBasis([0]), GradedBasis([0, 0]), M([[1]]), M([[0, 0]]))


def test_homology_of_w():
    h = homology(unknot_w())
    assert h.as_dict() == {(1, -2): QuotientStructure(1), (1, 2): QuotientStructure(1)}


def test_homology_zero_differentials():
    x = TwoComplex(GradedBasis([0, 0, 2]), GradedBasis([2]), SparseIntMatrix(1, 3), SparseIntMatrix(3, 1))
    h = homology(x)
    assert h[(0, 0)].rank == 2 and h[(0, 2)].rank == 1 and h[(1, 2)].rank == 1


def test_homology_cokernel_of_two():
    h = homology(one_one(2, 0))
    assert not h[(0, 0)]
    assert h[(1, 0)] == QuotientStructure(0, (2,))


def test_homology_rejects_non_complex():
    with pytest.raises(NotAComplex):
        homology(one_one(1, 1))


def test_reflex():
    x = unknot_w()
    assert reflex(reflex(x)) == x
    r = reflex(x)
    assert len(r.M0) == 2 and len(r.M1) == 0


def test_reflex_on_trefoil_homology(trefoil):
    x = build_framed_complex(trefoil)
    assert homology(reflex(x)) == homology(x).reflex()


def test_shift():
    x = build_framed_complex(parse_pd(CURL_PD))
    assert shift(x, 0) == x
    assert shift(shift(x, 3), -3) == x
    assert euler_char(shift(x, 5)) == euler_char(x).shift(5)
    assert homology(shift(x, 3)) == homology(x).shift(3)


def test_euler_char_examples():
    assert euler_char(unknot_w()) == LaurentPoly({-2: -1, 2: -1})
    assert euler_char(zero_complex()) == LaurentPoly()


def test_direct_sum_identity():
    x = build_framed_complex(parse_pd(TREFOIL_PD))
    assert direct_sum(x, zero_complex()).same_shape(x)


@pytest.mark.parametrize("seed", range(8))
def test_direct_sum_properties(seed):
    rng = random.Random(seed)
    x, y = random_complex(rng), random_complex(rng)
    s = direct_sum(x, y)
    assert verify_complex(s)
    assert euler_char(s) == euler_char(x) + euler_char(y)
    hx, hy, hs = homology(x), homology(y), homology(s)
    for key in set(hx.as_dict()) | set(hy.as_dict()):
        assert hs[key] == hx[key] + hy[key]


@pytest.mark.parametrize("seed", range(8))
def test_tensor_properties(seed):
    rng = random.Random(50 + seed)
    x, y = random_complex(rng), random_complex(rng)
    t = tensor(x, y)
    assert verify_complex(t)
    assert euler_char(t) == euler_char(x) * euler_char(y)


@pytest.mark.parametrize("names", [("trefoil_right", "hopf_plus"), ("fig8", "unknot")])
def test_tensor_of_catalog_complexes(names):
    x, y = (build_framed_complex(builtin(n).diagram) for n in names)
    t = tensor(x, y)
    assert verify_complex(t)
    assert euler_char(t) == euler_char(x) * euler_char(y)


def test_tensor_unit():
    x = build_framed_complex(parse_pd(CURL_PD))
    assert tensor(unit_complex(), x).same_shape(x)
    assert tensor(x, unit_complex()).same_shape(x)


def union_in_tensor_order(d1: LinkDiagram, d2: LinkDiagram) -> tuple[TwoComplex, TwoComplex]:
    """``<<D1 u D2>>`` rebased onto the generator order of the tensor product, and that product.

    Union generator ``(s, m)`` corresponds to ``((s1, m1), (s2, m2))`` with
    the crossings and circles of ``D1`` in the low bits. The two cube sign
    rules differ by ``(-1)^(|s_A(D1)| * b(s2))``.
    """
    u = build_framed_complex(disjoint_union(d1, d2))
    n1 = d1.n
    counts1 = [state_circles(d1, s)[1] for s in range(1 << n1)]
    sa = all_a_circles(d1)
    orders, signs = [], []
    t = tensor(build_framed_complex(d1), build_framed_complex(d2))
    for i in (0, 1):
        index = {key: k for k, key in enumerate(u.basis(i).key_list())}
        order, sign = [], []
        for (s1, m1), (s2, m2) in t.basis(i).key_list():
            k1 = counts1[s1]
            order.append(index[(s1 | (s2 << n1), m1 | (m2 << k1))])
            sign.append(-1 if sa * bin(s2).count("1") % 2 else 1)
        orders.append(order)
        signs.append(sign)
    return u.rebased(orders[0], orders[1], signs[0], signs[1]), t


@pytest.mark.parametrize(
    "a, b",
    [("PD[O(1)]", "PD[O(1)]"), ("PD[O(1)]", CURL_PD), (CURL_PD, "PD[O(1)]"), (CURL_PD, CURL_PD),
     (TREFOIL_PD, CURL_PD), (CURL_PD, TREFOIL_PD)],
)
def test_disjoint_union_is_tensor(a, b):
    rebased, t = union_in_tensor_order(parse_pd(a), parse_pd(b))
    assert rebased.same_shape(t)


def test_alternating_rank_identity(trefoil):
    x = build_framed_complex(trefoil)
    h = homology(x)
    for j in set(x.M0.degrees.tolist()) | set(x.M1.degrees.tolist()):
        lhs = int(np.sum(x.M0.degrees == j)) - int(np.sum(x.M1.degrees == j))
        assert lhs == h[(0, j)].rank - h[(1, j)].rank


def test_graded_homology_ops():
    h = GradedHomology.from_dict({(0, 2): QuotientStructure(1), (1, -2): QuotientStructure(0, (2,))})
    assert h.reflex().reflex() == h
    assert h.reflex(2) == h
    assert h.shift(3).degrees() == [1, 5]
    assert h.euler_char() == LaurentPoly({2: 1})
    assert h.torsion_table() == {(1, -2): (2,)}
    assert str(h.poincare()) == "A^2"


def test_chain_maps():
    x = one_one(2, 0)
    ident = ChainMap(SparseIntMatrix.identity(1), SparseIntMatrix.identity(1))
    assert is_chain_map(ident, x, x)
    bad = ChainMap(SparseIntMatrix.identity(1), SparseIntMatrix.zeros(1, 1))
    assert not is_chain_map(bad, x, x)
    assert ident.compose(ident).f0 == SparseIntMatrix.identity(1)


def test_parallel_homology_matches_serial():
    x = build_framed_complex(builtin("fig8").diagram)
    assert homology(x, workers=2) == homology(x, workers=1)
