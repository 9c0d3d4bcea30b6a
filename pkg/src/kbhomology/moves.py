"""Reidemeister moves on PD diagrams.

All moves work on positions ``(crossing, slot)``. Crossings untouched by a
move keep their index and slot layout, new crossings are appended (R1, R2)
or replace the three triangle crossings in place (R3). Oriented inputs get
oriented outputs: every untouched position keeps its direction.

The local pictures behind the tuples:

* R2 takes two darts bounding a common face (the face on their left) and
  pushes ``f`` across ``e``. With ``e`` running west to east and ``f``
  running east to west just north of it, ``f`` dips south and creates two
  crossings, ``P`` to the east and ``Q`` to the west.
* R3 takes a triangular face walked as ``X -> Y -> Z`` and slides the side
  ``XY`` past the opposite crossing ``Z``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .diagram import LinkDiagram, OrientedDiagram, compact, incoming_positions, orient
from .errors import IllegalSite


class Move(str, Enum):
    R1_PLUS = "R1+"
    R1_MINUS = "R1-"
    R2 = "R2"
    R3 = "R3"


@dataclass(frozen=True)
class R2Site:
    """Push dart ``f`` across dart ``e``.

    A dart is an edge label plus the ``(crossing, slot)`` where it starts;
    free loops use ``None``. With ``f_over`` the pushed strand passes over.
    """

    e: int
    e_start: tuple[int, int] | None
    f: int
    f_start: tuple[int, int] | None
    f_over: bool = True


class _Builder:
    """Mutable copy of a diagram whose entries are ``(label, old_position)`` tags."""

    def __init__(self, d: LinkDiagram):
        self.d = d
        self.crossings = [[(e, (c, p)) for p, e in enumerate(x)] for c, x in enumerate(d.crossings)]
        self.loops = list(d.loops)
        self.next_label = d.edge_count + 1

    def fresh(self) -> int:
        self.next_label += 1
        return self.next_label - 1

    def set_label(self, pos: tuple[int, int], label: int):
        c, p = pos
        self.crossings[c][p] = (label, self.crossings[c][p][1])

    def finish(self, incoming_old: set[tuple[int, int]] | None):
        raw = [tuple(e for e, _ in x) for x in self.crossings]
        new_d, _ = compact(raw, self.loops)
        if incoming_old is None:
            return new_d
        hints = set()
        for c, x in enumerate(self.crossings):
            for p, (_, old) in enumerate(x):
                if old is not None and old in incoming_old:
                    hints.add((c, p))
        return orient(new_d, hints)


def _unwrap(d):
    if isinstance(d, OrientedDiagram):
        return d.diagram, incoming_positions(d)
    return d, None


def _r1(d: LinkDiagram, incoming, site, positive: bool):
    if isinstance(site, int):
        label, side = site, 0
    else:
        label, side = site
    if side not in (0, 1):
        raise IllegalSite("curl side must be 0 or 1")
    b = _Builder(d)
    if label in d.loops:
        b.loops.remove(label)
        loop = b.fresh()
        e = label
        if positive:
            x = (e, e, loop, loop) if side == 0 else (loop, loop, e, e)
        else:
            x = (e, loop, loop, e) if side == 0 else (loop, e, e, loop)
        b.crossings.append([(v, None) for v in x])
        return b.finish(incoming)
    occ = d.occurrences.get(label)
    if occ is None:
        raise IllegalSite(f"no edge labelled {label}")
    start, end = occ
    if incoming is not None and start in incoming:
        start, end = end, start
    q, loop = b.fresh(), b.fresh()
    b.set_label(end, q)
    e = label
    if positive:
        x = (e, q, loop, loop) if side == 0 else (loop, loop, q, e)
    else:
        x = (e, loop, loop, q) if side == 0 else (loop, e, q, loop)
    b.crossings.append([(v, None) for v in x])
    return b.finish(incoming)


def _dart_end(d: LinkDiagram, label: int, start):
    occ = d.occurrences.get(label)
    if occ is None or start not in occ:
        raise IllegalSite(f"{start} is not an end of edge {label}")
    return occ[1] if occ[0] == start else occ[0]


def _share_face(d: LinkDiagram, dart_e, dart_f) -> bool:
    for face in d.faces():
        if dart_e in face and dart_f in face:
            return True
    return False


def _r2(d: LinkDiagram, incoming, site: R2Site):
    e_loop = site.e in d.loops
    f_loop = site.f in d.loops
    if site.e == site.f and not e_loop:
        raise IllegalSite("R2 on a single edge is only supported for free loops")
    if not e_loop and not f_loop:
        e_end = _dart_end(d, site.e, site.e_start)
        f_end = _dart_end(d, site.f, site.f_start)
        if not _share_face(d, site.e_start + e_end, site.f_start + f_end):
            raise IllegalSite(f"darts on edges {site.e} and {site.f} do not share a face")
    for label, loop in ((site.e, e_loop), (site.f, f_loop)):
        if not loop and label not in d.occurrences:
            raise IllegalSite(f"no edge labelled {label}")
    b = _Builder(d)
    e1 = site.e
    f1 = site.f
    e2, f2 = b.fresh(), b.fresh()
    if site.e == site.f:
        b.loops.remove(site.e)
        e3 = f1 = b.fresh()
        f3 = e1
    else:
        if e_loop:
            b.loops.remove(site.e)
            e3 = e1
        else:
            e3 = b.fresh()
            b.set_label(_dart_end(d, site.e, site.e_start), e3)
        if f_loop:
            b.loops.remove(site.f)
            f3 = f1
        else:
            f3 = b.fresh()
            b.set_label(_dart_end(d, site.f, site.f_start), f3)
    if site.f_over:
        p = (e2, f2, e3, f1)
        q = (e1, f2, e2, f3)
    else:
        p = (f1, e2, f2, e3)
        q = (f2, e2, f3, e1)
    b.crossings.append([(v, None) for v in p])
    b.crossings.append([(v, None) for v in q])
    return b.finish(incoming)


@dataclass(frozen=True)
class _Triangle:
    x: int
    y: int
    z: int
    p: int
    q: int
    r: int

    def over_flags(self):
        """``(alpha over at X, alpha over at Y, beta over at Z)``."""
        return (self.p + 1) % 2 == 1, self.q % 2 == 1, self.r % 2 == 1

    def is_movable(self) -> bool:
        """The sliding side must pass over both other strands or under both."""
        ax, ay, _ = self.over_flags()
        return ax == ay


def _triangles(d: LinkDiagram) -> list[_Triangle]:
    out = []
    for face in d.faces():
        if len(face) != 3:
            continue
        for k in range(3):
            d0, d1, d2 = face[k], face[(k + 1) % 3], face[(k + 2) % 3]
            x, y, z = d0[0], d1[0], d2[0]
            if len({x, y, z}) != 3:
                break
            out.append(_Triangle(x, y, z, d2[3], d0[3], d1[3]))
    return out


def _r3(d: LinkDiagram, incoming, site: Sequence[int]):
    want = sorted(site)
    if len(want) != 3:
        raise IllegalSite("R3 needs three crossing indices")
    found = None
    for tri in _triangles(d):
        if sorted((tri.x, tri.y, tri.z)) == want and tri.is_movable():
            found = tri
            break
    if found is None:
        raise IllegalSite(f"crossings {tuple(site)} do not bound a movable triangle")
    t = found
    X, Y, Z = d.crossings[t.x], d.crossings[t.y], d.crossings[t.z]
    p, q, r = t.p, t.q, t.r

    def at(c, x, k):
        return (x[k % 4], (c, k % 4))

    L0, L1 = at(t.x, X, p + 1), at(t.x, X, p + 2)
    L2, L3 = at(t.y, Y, q + 1), at(t.y, Y, q + 2)
    L4, L5 = at(t.z, Z, r + 1), at(t.z, Z, r + 2)
    a = (X[(p - 1) % 4], None)
    bb = (Y[(q - 1) % 4], None)
    c = (Z[(r - 1) % 4], None)
    ax, ay, bz = t.over_flags()
    # counterclockwise endpoint lists; the flag marks the two under slots
    new_y = [(a, not ay), (L5, ay), (L0, not ay), (bb, ay)]
    new_x = [(L3, not ax), (L4, ax), (a, not ax), (c, ax)]
    new_z = [(c, bz), (bb, not bz), (L1, bz), (L2, not bz)]

    def rotate(entries):
        k = next(i for i, (_, under) in enumerate(entries) if under)
        entries = entries[k:] + entries[:k]
        return [tag for tag, _ in entries]

    builder = _Builder(d)
    builder.crossings[t.x] = rotate(new_x)
    builder.crossings[t.y] = rotate(new_y)
    builder.crossings[t.z] = rotate(new_z)
    return builder.finish(incoming)


def apply_move(d, move: Move | str, site):
    """Apply ``move`` at ``site`` and return a diagram of the same type.

    Sites: an edge label or ``(label, side)`` for R1, an :class:`R2Site`
    for R2, three crossing indices for R3.
    """
    move = Move(move)
    base, incoming = _unwrap(d)
    if move in (Move.R1_PLUS, Move.R1_MINUS):
        return _r1(base, incoming, site, move is Move.R1_PLUS)
    if move is Move.R2:
        if not isinstance(site, R2Site):
            raise IllegalSite("R2 needs an R2Site")
        return _r2(base, incoming, site)
    return _r3(base, incoming, site)


def move_sites(d, move: Move | str) -> list:
    """Every legal site for ``move`` in a deterministic order."""
    move = Move(move)
    base, _ = _unwrap(d)
    labels = range(1, base.edge_count + 1)
    if move in (Move.R1_PLUS, Move.R1_MINUS):
        return [(e, side) for e in labels for side in (0, 1)]
    if move is Move.R3:
        seen = []
        for tri in _triangles(base):
            key = tuple(sorted((tri.x, tri.y, tri.z)))
            if tri.is_movable() and key not in seen:
                seen.append(key)
        return seen
    sites = []
    for face in base.faces():
        for de in face:
            for df in face:
                e = base.crossings[de[0]][de[1]]
                f = base.crossings[df[0]][df[1]]
                if e == f:
                    continue
                for over in (True, False):
                    sites.append(R2Site(e, de[:2], f, df[:2], over))
    darts = [(x[p], (c, p)) for c, x in enumerate(base.crossings) for p in range(4)]
    for loop in base.loops:
        for over in (True, False):
            sites.append(R2Site(loop, None, loop, None, over))
            for label, start in darts:
                sites.append(R2Site(label, start, loop, None, over))
                sites.append(R2Site(loop, None, label, start, over))
            for other in base.loops:
                if other != loop:
                    sites.append(R2Site(loop, None, other, None, over))
    return sites


def random_move(rng, d, move: Move | str):
    """Apply ``move`` at a site drawn from ``rng``; ``None`` if no site exists."""
    sites = move_sites(d, move)
    if not sites:
        return None
    return apply_move(d, move, sites[rng.randrange(len(sites))])
