"""Built-in diagrams."""

from __future__ import annotations

from .diagram import LinkDiagram, OrientedDiagram, from_braid, orient
from .errors import UnknownName
from .moves import Move, apply_move

# 10_132 as a planar diagram (Rolfsen table), labels shifted to start at 1
_K10_132 = (
    (20, 13, 1, 14), (14, 1, 15, 2), (7, 3, 8, 2), (3, 18, 4, 19), (4, 10, 5, 9),
    (16, 5, 17, 6), (11, 7, 12, 6), (8, 19, 9, 20), (17, 10, 18, 11), (12, 15, 13, 16),
)


def _add_positive_curls(od: OrientedDiagram, count: int) -> OrientedDiagram:
    for _ in range(count):
        od = apply_move(od, Move.R1_PLUS, 1)
    return od


def _k10_132() -> OrientedDiagram:
    return orient(LinkDiagram(_K10_132))


_BUILDERS = {
    "unknot": lambda: OrientedDiagram(LinkDiagram((), (1,)), ()),
    "hopf_plus": lambda: from_braid([1, 1], 2),
    "trefoil_right": lambda: from_braid([1, 1, 1], 2),
    "trefoil_left": lambda: from_braid([-1, -1, -1], 2),
    "fig8": lambda: from_braid([1, -2, 1, -2], 3),
    "k5_1": lambda: from_braid([-1] * 5, 2),
    "k10_132": _k10_132,
    "k5_1_framed0": lambda: _add_positive_curls(from_braid([-1] * 5, 2), 5),
    "k10_132_framed0": lambda: _add_positive_curls(_k10_132(), 4),
}

NAMES = tuple(_BUILDERS)


def builtin(name: str) -> OrientedDiagram:
    try:
        build = _BUILDERS[name]
    except KeyError:
        raise UnknownName(f"unknown diagram {name!r}; choose from {', '.join(NAMES)}") from None
    return build()
