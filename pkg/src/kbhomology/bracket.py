"""Kauffman bracket by brute-force state sum, with a recursive skein oracle."""

from __future__ import annotations

from .diagram import LinkDiagram, OrientedDiagram, smooth, state_circles
from .errors import EmptyDiagram
from .laurent import LaurentPoly

A = LaurentPoly.monomial(1)
DELTA = LaurentPoly({2: -1, -2: -1})


def _state_sum(d: LinkDiagram, offset: int) -> LaurentPoly:
    """``sum_s A^(a-b) delta^(|s| + offset)``."""
    by_circles: dict[tuple[int, int], int] = {}
    n = d.n
    for s in range(1 << n):
        b = bin(s).count("1")
        _, k = state_circles(d, s)
        key = (n - 2 * b, k + offset)
        by_circles[key] = by_circles.get(key, 0) + 1
    total = LaurentPoly()
    for (deg, power), count in sorted(by_circles.items()):
        total = total + (DELTA ** power).shift(deg) * count
    return total


def kauffman_bracket(d: LinkDiagram) -> LaurentPoly:
    """``<D>`` normalized so the one-circle diagram gives 1."""
    if not d:
        raise EmptyDiagram("the bracket is normalized on nonempty diagrams only")
    return _state_sum(d, -1)


def unnormalized_bracket(d: LinkDiagram) -> LaurentPoly:
    """``(-A^2 - A^-2) <D>``; the empty diagram gives 1."""
    if not d:
        return LaurentPoly.one()
    return _state_sum(d, 0)


def kauffman_f(od: OrientedDiagram) -> LaurentPoly:
    """``(-A^3)^(-w) (-A^2 - A^-2) <D>``."""
    w = od.writhe
    sign = -1 if w % 2 else 1
    return unnormalized_bracket(od.diagram).shift(-3 * w) * sign


def skein_bracket(d: LinkDiagram) -> LaurentPoly:
    """Unnormalized bracket by smoothing the last crossing recursively."""
    if not d.n:
        return DELTA ** d.free_loops
    c = d.n - 1
    da, _ = smooth(d, c, "A")
    db, _ = smooth(d, c, "B")
    return skein_bracket(da).shift(1) + skein_bracket(db).shift(-1)
