"""Link diagrams in PD notation, Kauffman states and their resolutions.

A crossing is a 4-tuple of edge labels listed counterclockwise, starting at
an under-strand endpoint (the incoming one when the diagram is oriented).
The A-smoothing joins slots 0-1 and 2-3, the B-smoothing joins 0-3 and 1-2.
Crossing-free circles are stored as their own labels, so every label of a
diagram is either used by exactly two crossing slots or by one free loop.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

from .errors import BadArity, DuplicateEdgeUse, EmptyInput, LetterOutOfRange, PDError

Crossing = tuple[int, int, int, int]

A_PAIRS = ((0, 1), (2, 3))
B_PAIRS = ((0, 3), (1, 2))


@dataclass(frozen=True)
class LinkDiagram:
    crossings: tuple[Crossing, ...]
    loops: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(tuple(int(e) for e in x) for x in self.crossings))
        object.__setattr__(self, "loops", tuple(int(e) for e in self.loops))
        counts: dict[int, int] = {}
        for x in self.crossings:
            if len(x) != 4:
                raise BadArity(f"crossing {x} does not have four edges")
            for e in x:
                counts[e] = counts.get(e, 0) + 1
        for e in self.loops:
            if e in counts:
                raise DuplicateEdgeUse(f"loop label {e} is already used")
            counts[e] = 2
        bad = sorted(e for e, k in counts.items() if k != 2)
        if bad:
            raise DuplicateEdgeUse(f"edge labels used other than twice: {bad}")
        if counts and sorted(counts) != list(range(1, len(counts) + 1)):
            raise PDError(f"edge labels must be exactly 1..{len(counts)}")

    @property
    def n(self) -> int:
        return len(self.crossings)

    @property
    def free_loops(self) -> int:
        return len(self.loops)

    @property
    def edge_count(self) -> int:
        return 2 * self.n + self.free_loops

    def __bool__(self):
        return bool(self.crossings or self.loops)

    def to_pd(self) -> str:
        items = [f"X({a},{b},{c},{d})" for a, b, c, d in self.crossings]
        items += [f"O({e})" for e in self.loops]
        return "PD[" + ", ".join(items) + "]"

    def __str__(self):
        return self.to_pd()

    @cached_property
    def occurrences(self) -> dict[int, list[tuple[int, int]]]:
        """Label -> the two ``(crossing, slot)`` positions where it ends."""
        occ: dict[int, list[tuple[int, int]]] = {}
        for c, x in enumerate(self.crossings):
            for p, e in enumerate(x):
                occ.setdefault(e, []).append((c, p))
        return occ

    def other_end(self, c: int, p: int) -> tuple[int, int]:
        a, b = self.occurrences[self.crossings[c][p]]
        return b if a == (c, p) else a

    def strand_components(self) -> list[list[tuple[int, int, int]]]:
        """Link components as cyclic lists of passes ``(crossing, in_slot, out_slot)``.

        Free loops are not included; the traversal direction is arbitrary.
        """
        seen: set[tuple[int, int]] = set()
        comps = []
        for c0 in range(self.n):
            for p0 in range(4):
                if (c0, p0) in seen:
                    continue
                passes = []
                c, p = c0, p0
                while (c, p) not in seen:
                    q = (p + 2) % 4
                    seen.add((c, p))
                    seen.add((c, q))
                    passes.append((c, p, q))
                    c, p = self.other_end(c, q)
                comps.append(passes)
        return comps

    @property
    def components(self) -> int:
        return len(self.strand_components()) + self.free_loops

    def faces(self) -> list[list[tuple[int, int, int, int]]]:
        """Faces of the projection as cycles of darts ``(c_from, p_from, c_to, p_to)``.

        Each dart runs along one edge; its face lies on its left.
        """
        seen = set()
        out = []
        for c0 in range(self.n):
            for p0 in range(4):
                start = (c0, p0) + self.other_end(c0, p0)
                if start in seen:
                    continue
                face = []
                dart = start
                while dart not in seen:
                    seen.add(dart)
                    face.append(dart)
                    c, p = dart[2], dart[3]
                    q = (p - 1) % 4
                    dart = (c, q) + self.other_end(c, q)
                out.append(face)
        return out

    def euler_defect(self) -> int:
        """``V - E + F - 2*pieces`` of the projection; zero iff it is planar."""
        if not self.n:
            return 0
        parent = list(range(self.n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for occ in self.occurrences.values():
            (c1, _), (c2, _) = occ
            parent[find(c1)] = find(c2)
        pieces = len({find(c) for c in range(self.n)})
        return self.n - 2 * self.n + len(self.faces()) - 2 * pieces


@dataclass(frozen=True)
class OrientedDiagram:
    """A diagram whose slot 0 is always the incoming under edge.

    ``signs[c]`` is +1 when the over strand runs from slot 3 to slot 1.
    """

    diagram: LinkDiagram
    signs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        if len(self.signs) != self.diagram.n or any(s not in (1, -1) for s in self.signs):
            raise PDError("one sign of +1 or -1 is needed per crossing")
        heads: dict[int, int] = {}
        tails: dict[int, int] = {}
        for c, x in enumerate(self.diagram.crossings):
            for p, e in enumerate(x):
                book = heads if self.incoming(c, p) else tails
                book[e] = book.get(e, 0) + 1
        if any(v != 1 for v in heads.values()) or any(v != 1 for v in tails.values()):
            raise PDError("orientation is inconsistent along a strand")

    def incoming(self, c: int, p: int) -> bool:
        if p == 0:
            return True
        if p == 2:
            return False
        return (p == 3) == (self.signs[c] == 1)

    @property
    def n(self) -> int:
        return self.diagram.n

    @property
    def n_plus(self) -> int:
        return sum(1 for s in self.signs if s > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for s in self.signs if s < 0)

    @property
    def writhe(self) -> int:
        return self.n_plus - self.n_minus

    @property
    def components(self) -> int:
        return self.diagram.components

    def to_pd(self) -> str:
        return self.diagram.to_pd()


def orient(d: LinkDiagram, hints: set[tuple[int, int]] | None = None) -> OrientedDiagram:
    """Choose an orientation and rewrite crossings so slot 0 is incoming.

    ``hints`` holds ``(crossing, slot)`` positions that must be incoming; a
    component without hints is directed so that its first under-pass enters
    at slot 0 (or from its lowest slot when it has no under-pass).
    """
    hints = hints or set()
    incoming_under: dict[int, int] = {}
    incoming_over: dict[int, int] = {}
    for passes in d.strand_components():
        forward = None
        for c, p_in, p_out in passes:
            if (c, p_in) in hints:
                forward = True
                break
            if (c, p_out) in hints:
                forward = False
                break
        if forward is None:
            unders = [ps for ps in passes if ps[1] % 2 == 0]
            forward = not unders or unders[0][1] == 0
        for c, p_in, p_out in passes:
            if not forward:
                p_in, p_out = p_out, p_in
            if p_in % 2 == 0:
                incoming_under[c] = p_in
            else:
                incoming_over[c] = p_in
    crossings = []
    signs = []
    for c, x in enumerate(d.crossings):
        r = incoming_under[c]
        crossings.append(x[r:] + x[:r])
        signs.append(1 if (incoming_over[c] - r) % 4 == 3 else -1)
    return OrientedDiagram(LinkDiagram(tuple(crossings), d.loops), tuple(signs))


def incoming_positions(od: OrientedDiagram) -> set[tuple[int, int]]:
    """Every ``(crossing, slot)`` at which an edge enters its crossing."""
    return {(c, p) for c in range(od.n) for p in range(4) if od.incoming(c, p)}


_ITEM = re.compile(r"([XO])\(([^()]*)\)")


def parse_pd(text: str) -> LinkDiagram:
    """Parse ``PD[X(1,4,2,5), ..., O(7)]``; whitespace is ignored."""
    body = re.sub(r"\s+", "", text or "")
    if not body:
        raise EmptyInput("empty PD text")
    m = re.fullmatch(r"PD\[(.*)\]", body)
    if not m:
        raise PDError(f"expected PD[...], got {text!r}")
    inner = m.group(1)
    if not inner:
        raise EmptyInput("PD code has no crossings or loops")
    crossings = []
    loops = []
    pos = 0
    while pos < len(inner):
        item = _ITEM.match(inner, pos)
        if not item:
            raise PDError(f"unexpected text at {inner[pos:]!r}")
        kind, args = item.groups()
        try:
            values = [int(v) for v in args.split(",")] if args else []
        except ValueError:
            raise PDError(f"non-integer label in {item.group(0)}") from None
        if any(v < 1 for v in values):
            raise PDError(f"labels must be positive in {item.group(0)}")
        if kind == "X":
            if len(values) != 4:
                raise BadArity(f"{item.group(0)} must have four labels")
            crossings.append(tuple(values))
        else:
            if len(values) != 1:
                raise BadArity(f"{item.group(0)} must have one label")
            loops.append(values[0])
        pos = item.end()
        if pos < len(inner):
            if inner[pos] != ",":
                raise PDError(f"expected ',' at {inner[pos:]!r}")
            pos += 1
            if pos == len(inner):
                raise PDError("trailing comma")
    return LinkDiagram(tuple(crossings), tuple(loops))


def parse_braid(text: str) -> tuple[list[int], int]:
    """Parse ``BR[strands; w1 w2 ...]`` into ``(word, strands)``."""
    m = re.fullmatch(r"\s*BR\[\s*(\d+)\s*;([^\]]*)\]\s*", text or "")
    if not m:
        raise PDError(f"expected BR[strands; letters], got {text!r}")
    strands = int(m.group(1))
    letters = m.group(2).replace(",", " ").split()
    try:
        word = [int(v) for v in letters]
    except ValueError:
        raise PDError(f"braid letters must be integers: {text!r}") from None
    return word, strands


def from_braid(word: Sequence[int], strands: int) -> OrientedDiagram:
    """Oriented closure of a braid; letter ``k`` is ``sigma_k`` (positive)."""
    if strands < 1:
        raise LetterOutOfRange("a braid needs at least one strand")
    for k in word:
        if k == 0 or abs(k) >= strands:
            raise LetterOutOfRange(f"letter {k} is out of range for {strands} strands")
    bottom = list(range(strands))
    top = list(bottom)
    next_label = strands
    raw = []
    signs = []
    for k in word:
        i = abs(k) - 1
        t_i, t_j = next_label, next_label + 1
        next_label += 2
        b_i, b_j = top[i], top[i + 1]
        if k > 0:
            raw.append((b_j, t_j, t_i, b_i))
        else:
            raw.append((b_i, b_j, t_j, t_i))
        signs.append(1 if k > 0 else -1)
        top[i], top[i + 1] = t_i, t_j
    # close the braid: the top label at each position is the bottom label there
    alias = {top[pos]: bottom[pos] for pos in range(strands)}

    def canon(e):
        return alias.get(e, e)

    used = [tuple(canon(e) for e in x) for x in raw]
    loop_raw = [bottom[pos] for pos in range(strands) if top[pos] == bottom[pos]]
    order = sorted({e for x in used for e in x} | set(loop_raw))
    relabel = {e: i + 1 for i, e in enumerate(order)}
    crossings = tuple(tuple(relabel[e] for e in x) for x in used)
    loops = tuple(relabel[e] for e in loop_raw)
    return OrientedDiagram(LinkDiagram(crossings, loops), tuple(signs))


@dataclass(frozen=True)
class KauffmanState:
    """0 = A-smoothing, 1 = B-smoothing, indexed by crossing order."""

    bits: tuple[int, ...]

    @classmethod
    def from_index(cls, index: int, n: int) -> "KauffmanState":
        return cls(tuple((index >> c) & 1 for c in range(n)))

    @property
    def index(self) -> int:
        return sum(b << c for c, b in enumerate(self.bits))

    @property
    def a(self) -> int:
        return len(self.bits) - sum(self.bits)

    @property
    def b(self) -> int:
        return sum(self.bits)

    def __len__(self):
        return len(self.bits)


def state_circles(d: LinkDiagram, index: int) -> tuple[list[int], int]:
    """Circle id per label (list indexed by label, slot 0 unused) and circle count.

    Circles are numbered in order of their smallest label.
    """
    size = d.edge_count + 1
    parent = list(range(size))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for c, x in enumerate(d.crossings):
        pairs = B_PAIRS if (index >> c) & 1 else A_PAIRS
        for p, q in pairs:
            ra, rb = find(x[p]), find(x[q])
            if ra != rb:
                if ra < rb:
                    parent[rb] = ra
                else:
                    parent[ra] = rb
    ids = [0] * size
    root_id: dict[int, int] = {}
    for e in range(1, size):
        r = find(e)
        if r not in root_id:
            root_id[r] = len(root_id)
        ids[e] = root_id[r]
    return ids, len(root_id)


@dataclass(frozen=True)
class Resolution:
    state: KauffmanState
    circles: tuple[frozenset[int], ...]
    crossing_circles: tuple[tuple[int, int], ...]
    """Per crossing, the circles carrying the smoothing arcs at slots 0 and 2."""

    @property
    def size(self) -> int:
        return len(self.circles)

    def circle_of(self, label: int) -> int:
        for i, circ in enumerate(self.circles):
            if label in circ:
                return i
        raise KeyError(label)


def resolve(d: LinkDiagram, s: KauffmanState | Sequence[int]) -> Resolution:
    if not isinstance(s, KauffmanState):
        s = KauffmanState(tuple(s))
    if len(s) != d.n:
        raise ValueError(f"state has {len(s)} bits but the diagram has {d.n} crossings")
    ids, count = state_circles(d, s.index)
    members: list[set[int]] = [set() for _ in range(count)]
    for e in range(1, d.edge_count + 1):
        members[ids[e]].add(e)
    per_crossing = tuple((ids[x[0]], ids[x[2]]) for x in d.crossings)
    return Resolution(s, tuple(frozenset(m) for m in members), per_crossing)


def all_a_circles(d: LinkDiagram) -> int:
    """``|s_A|``: circles of the all-A state, free loops included."""
    return state_circles(d, 0)[1]


@dataclass(frozen=True)
class CubeEdge:
    source: KauffmanState
    target: KauffmanState
    crossing: int
    kind: str  # "merge" or "split"
    source_circles: tuple[int, ...]
    target_circles: tuple[int, ...]
    untouched: tuple[tuple[int, int], ...]
    sign: int

    @property
    def height(self) -> int:
        """``|xi|`` = b of the source state."""
        return self.source.b


def edge_geometry(d: LinkDiagram, src_ids, tgt_ids, c: int):
    """Circle bookkeeping for flipping crossing ``c`` from A to B.

    Returns ``(kind, source_circles, target_circles, untouched)`` where
    untouched maps every other source circle to its target circle.
    """
    x = d.crossings[c]
    sa, sb = src_ids[x[0]], src_ids[x[2]]
    if sa != sb:
        kind = "merge"
        src = (min(sa, sb), max(sa, sb))
        tgt = (tgt_ids[x[0]],)
    else:
        kind = "split"
        src = (sa,)
        ta, tb = tgt_ids[x[0]], tgt_ids[x[1]]
        tgt = (min(ta, tb), max(ta, tb))
    mapping = {}
    for e in range(1, len(src_ids)):
        ci = src_ids[e]
        if ci not in src and ci not in mapping:
            mapping[ci] = tgt_ids[e]
    return kind, src, tgt, tuple(sorted(mapping.items()))


def edge_sign(index: int, c: int) -> int:
    """``(-1)^xi``: parity of B-markings at crossings before ``c``."""
    return -1 if bin(index & ((1 << c) - 1)).count("1") % 2 else 1


def cube_edges(d: LinkDiagram) -> list[CubeEdge]:
    """All ``n * 2^(n-1)`` edges, sorted by (source state index, crossing)."""
    n = d.n
    cache = {}

    def circles(i):
        if i not in cache:
            cache[i] = state_circles(d, i)
        return cache[i]

    out = []
    for idx in range(1 << n):
        src_ids, src_count = circles(idx)
        for c in range(n):
            if (idx >> c) & 1:
                continue
            tgt = idx | (1 << c)
            tgt_ids, tgt_count = circles(tgt)
            kind, sc, tc, untouched = edge_geometry(d, src_ids, tgt_ids, c)
            out.append(
                CubeEdge(
                    KauffmanState.from_index(idx, n),
                    KauffmanState.from_index(tgt, n),
                    c,
                    kind,
                    sc,
                    tc,
                    untouched,
                    edge_sign(idx, c),
                )
            )
    return out


def iter_states(n: int) -> Iterator[KauffmanState]:
    for i in range(1 << n):
        yield KauffmanState.from_index(i, n)


# -- structural operations ------------------------------------------------


def relabel(d: LinkDiagram, mapping: dict[int, int]) -> LinkDiagram:
    return LinkDiagram(
        tuple(tuple(mapping[e] for e in x) for x in d.crossings),
        tuple(mapping[e] for e in d.loops),
    )


def disjoint_union(d1: LinkDiagram, d2: LinkDiagram) -> LinkDiagram:
    """``d1`` followed by ``d2`` with its labels shifted past those of ``d1``."""
    off = d1.edge_count
    crossings = tuple(tuple(e + off for e in x) for x in d2.crossings)
    return LinkDiagram(d1.crossings + crossings, d1.loops + tuple(e + off for e in d2.loops))


def oriented_union(o1: OrientedDiagram, o2: OrientedDiagram) -> OrientedDiagram:
    return OrientedDiagram(disjoint_union(o1.diagram, o2.diagram), o1.signs + o2.signs)


def reorder(d, perm: Sequence[int]):
    """Reorder crossings so that new crossing ``i`` is old crossing ``perm[i]``."""
    if sorted(perm) != list(range(d.n)):
        raise ValueError("perm must be a permutation of the crossing indices")
    if isinstance(d, OrientedDiagram):
        return OrientedDiagram(reorder(d.diagram, perm), tuple(d.signs[i] for i in perm))
    return LinkDiagram(tuple(d.crossings[i] for i in perm), d.loops)


def mirror(d):
    """Swap over and under at every crossing."""
    if isinstance(d, OrientedDiagram):
        out = []
        for x, s in zip(d.diagram.crossings, d.signs):
            r = 3 if s > 0 else 1
            out.append(x[r:] + x[:r])
        return OrientedDiagram(LinkDiagram(tuple(out), d.diagram.loops), tuple(-s for s in d.signs))
    return LinkDiagram(tuple(x[1:] + x[:1] for x in d.crossings), d.loops)


def compact(crossings: Sequence[Crossing], loops: Sequence[int]) -> tuple[LinkDiagram, dict[int, int]]:
    """Renumber labels to ``1..E`` preserving their relative order."""
    used = sorted({e for x in crossings for e in x} | set(loops))
    mapping = {e: i + 1 for i, e in enumerate(used)}
    d = LinkDiagram(
        tuple(tuple(mapping[e] for e in x) for x in crossings),
        tuple(mapping[e] for e in loops),
    )
    return d, mapping


def smooth(d: LinkDiagram, c: int, kind: str) -> tuple[LinkDiagram, dict[int, int]]:
    """Smooth crossing ``c`` (``"A"`` or ``"B"``).

    Returns the smaller diagram and a map from every old label to the new
    label of the edge or loop containing it.
    """
    from .errors import IndexOutOfRange

    if not 0 <= c < d.n:
        raise IndexOutOfRange(f"crossing {c} out of range for {d.n} crossings")
    x = d.crossings[c]
    pairs = A_PAIRS if kind == "A" else B_PAIRS
    parent = {e: e for e in range(1, d.edge_count + 1)}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for p, q in pairs:
        ra, rb = find(x[p]), find(x[q])
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    rest = d.crossings[:c] + d.crossings[c + 1:]
    in_rest = {find(e) for y in rest for e in y}
    new_loops = sorted({find(e) for e in x} - in_rest)
    loops = list(d.loops) + new_loops
    crossings = [tuple(find(e) for e in y) for y in rest]
    smaller, mapping = compact(crossings, loops)
    full = {e: mapping[find(e)] for e in parent}
    return smaller, full


def random_braid(rng, max_crossings: int, max_strands: int = 4, min_crossings: int = 1) -> OrientedDiagram:
    strands = rng.randint(2, max_strands)
    length = rng.randint(min_crossings, max_crossings)
    word = [rng.choice([1, -1]) * rng.randint(1, strands - 1) for _ in range(length)]
    return from_braid(word, strands)


__all__ = [
    "LinkDiagram",
    "OrientedDiagram",
    "KauffmanState",
    "Resolution",
    "CubeEdge",
    "parse_pd",
    "parse_braid",
    "from_braid",
    "orient",
    "incoming_positions",
    "resolve",
    "cube_edges",
    "state_circles",
    "all_a_circles",
    "disjoint_union",
    "oriented_union",
    "reorder",
    "mirror",
    "smooth",
    "compact",
    "random_braid",
]
