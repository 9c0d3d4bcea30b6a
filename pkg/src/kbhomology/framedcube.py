"""The framed 2-complex on the cube of Kauffman states and its homology.

A generator is a state ``s`` together with a labeling of its circles by
``w_+`` (degree 2) or ``w_-`` (degree -2), stored as a bitmask whose bit
``k`` is set when circle ``k`` carries ``w_+``. Its q-degree is the sum of
label degrees plus ``a(s) - b(s)`` and its parity is ``b(s) + |s_A|``.
Within each parity, generators are ordered by state index, then mask.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .diagram import LinkDiagram, edge_geometry, edge_sign, smooth, state_circles
from .errors import IllegalSite, IndexOutOfRange
from .intlinalg import SparseIntMatrix
from .twocomplex import ChainMap, GradedBasis, GradedHomology, TwoComplex, homology, is_chain_map


class WLabel(Enum):
    w_minus = 0
    w_plus = 1

    @property
    def degree(self) -> int:
        return 2 if self is WLabel.w_plus else -2


def mbar(x: WLabel, y: WLabel) -> dict[WLabel, int]:
    """Framed multiplication as a formal combination ``{label: coefficient}``."""
    if x is WLabel.w_plus and y is WLabel.w_plus:
        return {}
    if x is WLabel.w_minus and y is WLabel.w_minus:
        return {WLabel.w_minus: 1}
    return {WLabel.w_plus: 1}


def deltabar(x: WLabel) -> dict[tuple[WLabel, WLabel], int]:
    """Framed comultiplication as ``{(left, right): coefficient}``."""
    if x is WLabel.w_plus:
        return {(WLabel.w_plus, WLabel.w_plus): 1}
    return {(WLabel.w_plus, WLabel.w_minus): 1, (WLabel.w_minus, WLabel.w_plus): 1}


def _popcount(a: np.ndarray) -> np.ndarray:
    a = a.astype(np.int64)
    out = np.zeros_like(a)
    while np.any(a):
        out += a & 1
        a >>= 1
    return out


class CubeLayout:
    """Circle data for every state plus generator positions in ``M_0``/``M_1``."""

    def __init__(self, d: LinkDiagram):
        self.diagram = d
        n = d.n
        self.n = n
        self.ids = []
        counts = []
        for s in range(1 << n):
            ids, k = state_circles(d, s)
            self.ids.append(ids)
            counts.append(k)
        self.counts = np.asarray(counts, dtype=np.int64)
        self.sA = int(self.counts[0])
        states = np.arange(1 << n, dtype=np.int64)
        self.b = _popcount(states)
        self.parity = (self.b + self.sA) % 2
        sizes = np.left_shift(np.int64(1), self.counts)
        self.offset = np.zeros(1 << n, dtype=np.int64)
        self.size = [0, 0]
        for s in range(1 << n):
            p = int(self.parity[s])
            self.offset[s] = self.size[p]
            self.size[p] += int(sizes[s])

    def circle_bits(self, s: int):
        """Per-generator label bit arrays for state ``s`` (shape ``(counts, 2^counts)``)."""
        k = int(self.counts[s])
        masks = np.arange(1 << k, dtype=np.int64)
        return masks, [(masks >> u) & 1 for u in range(k)]

    def basis(self, parity: int) -> GradedBasis:
        """Generator degrees with ``(state, mask)`` keys."""
        degs, keys = [], []
        for s in range(1 << self.n):
            if self.parity[s] != parity:
                continue
            k = int(self.counts[s])
            masks = np.arange(1 << k, dtype=np.int64)
            pc = _popcount(masks)
            a = self.n - int(self.b[s])
            degs.append(2 * (2 * pc - k) + a - int(self.b[s]))
            keys.append(np.stack([np.full(masks.size, s), masks], axis=1))
        if not degs:
            return GradedBasis(np.zeros(0, dtype=np.int64), np.zeros((0, 2), dtype=np.int64))
        return GradedBasis(np.concatenate(degs), np.concatenate(keys))


def _edge_entries(layout: CubeLayout, s: int, c: int):
    """Local matrix entries for the cube edge flipping crossing ``c`` at state ``s``.

    Returns ``(source_masks, target_masks, values)`` before positioning.
    """
    t = s | (1 << c)
    src_ids, tgt_ids = layout.ids[s], layout.ids[t]
    kind, sc, tc, untouched = edge_geometry(layout.diagram, src_ids, tgt_ids, c)
    masks, bits = layout.circle_bits(s)
    base = np.zeros_like(masks)
    for u, v in untouched:
        base |= bits[u] << v
    sign = edge_sign(s, c)
    if kind == "merge":
        x, y = bits[sc[0]], bits[sc[1]]
        keep = (x & y) == 0
        out = (x | y)[keep]
        return masks[keep], base[keep] | (out << tc[0]), np.full(int(keep.sum()), sign)
    x = bits[sc[0]]
    k, m = tc
    # w_+ splits into a single term, w_- into two
    single = x == 1
    one_src, one_tgt = masks[single], base[single] | (x[single] << k) | (x[single] << m)
    dbl = ~single
    two_src = np.concatenate([masks[dbl], masks[dbl]])
    two_tgt = np.concatenate([base[dbl] | (1 << k), base[dbl] | (1 << m)])
    src = np.concatenate([one_src, two_src])
    tgt = np.concatenate([one_tgt, two_tgt])
    return src, tgt, np.full(src.size, sign)


def cube_differentials(layout: CubeLayout):
    """COO triplets of the full cube differential split by source parity."""
    parts = {0: ([], [], []), 1: ([], [], [])}
    n = layout.n
    for s in range(1 << n):
        p = int(layout.parity[s])
        for c in range(n):
            if (s >> c) & 1:
                continue
            t = s | (1 << c)
            src, tgt, val = _edge_entries(layout, s, c)
            rows, cols, vals = parts[p]
            rows.append(tgt + layout.offset[t])
            cols.append(src + layout.offset[s])
            vals.append(val)
    out = {}
    for p in (0, 1):
        rows, cols, vals = parts[p]
        if rows:
            out[p] = (np.concatenate(rows), np.concatenate(cols), np.concatenate(vals).astype(np.int64))
        else:
            empty = np.zeros(0, dtype=np.int64)
            out[p] = (empty, empty, empty)
    return out


def build_framed_complex(d: LinkDiagram) -> TwoComplex:
    """The 2-complex on the Kauffman cube of ``d``."""
    layout = CubeLayout(d)
    m0, m1 = layout.basis(0), layout.basis(1)
    parts = cube_differentials(layout)
    d0 = SparseIntMatrix(len(m1), len(m0), *parts[0])
    d1 = SparseIntMatrix(len(m0), len(m1), *parts[1])
    return TwoComplex(m0, m1, d0, d1)


@lru_cache(maxsize=64)
def _framed_homology_cached(d: LinkDiagram, workers: int | None) -> GradedHomology:
    return homology(build_framed_complex(d), workers=workers)


def framed_homology(d: LinkDiagram, workers: int | None = None) -> GradedHomology:
    return _framed_homology_cached(d, workers)


# -- skein decomposition --------------------------------------------------


@dataclass(frozen=True)
class SkeinDecomposition:
    complex: TwoComplex
    a_part: TwoComplex
    b_part: TwoComplex
    inclusion: ChainMap
    projection: ChainMap


def _embedding(big: LinkDiagram, small: LinkDiagram, label_map, c: int, bit: int):
    """Positions of ``small``'s generators inside ``big`` when crossing ``c`` has value ``bit``.

    Returns, per parity, arrays ``(big_position, sign)`` indexed by small position.
    """
    lb, ls = CubeLayout(big), CubeLayout(small)
    out = {0: [np.zeros(ls.size[0], dtype=np.int64), np.ones(ls.size[0], dtype=np.int64)],
           1: [np.zeros(ls.size[1], dtype=np.int64), np.ones(ls.size[1], dtype=np.int64)]}
    low = (1 << c) - 1
    for sp in range(1 << small.n):
        s = (sp & low) | (bit << c) | ((sp & ~low) << 1)
        big_ids, small_ids = lb.ids[s], ls.ids[sp]
        # circle u of the big state -> circle of the small state
        perm = {}
        for e in range(1, big.edge_count + 1):
            perm.setdefault(big_ids[e], small_ids[label_map[e]])
        masks, bits = ls.circle_bits(sp)
        big_mask = np.zeros_like(masks)
        for u, v in perm.items():
            big_mask |= ((masks >> v) & 1) << u
        sign = -1 if bit and bin(sp >> c).count("1") % 2 else 1
        p = int(ls.parity[sp])
        if int(lb.parity[s]) != p:
            raise AssertionError("parity of a smoothing does not match")
        sl = slice(int(ls.offset[sp]), int(ls.offset[sp]) + masks.size)
        out[p][0][sl] = big_mask + lb.offset[s]
        out[p][1][sl] = sign
    return out, lb, ls


def _placement(rows_total: int, emb) -> SparseIntMatrix:
    pos, sign = emb
    return SparseIntMatrix(rows_total, pos.size, pos, np.arange(pos.size), sign)


def skein_decompose(d: LinkDiagram, c: int) -> SkeinDecomposition:
    """Split ``<<D>>`` at crossing ``c`` into ``<<D_B>>{-1}`` (sub) and ``<<D_A>>{1}`` (quotient)."""
    if not 0 <= c < d.n:
        raise IndexOutOfRange(f"crossing {c} out of range for {d.n} crossings")
    full = build_framed_complex(d)
    da, map_a = smooth(d, c, "A")
    db, map_b = smooth(d, c, "B")
    a_part = build_framed_complex(da)
    a_part = TwoComplex(a_part.M0.shifted(1), a_part.M1.shifted(1), a_part.D0, a_part.D1)
    b_part = build_framed_complex(db)
    b_part = TwoComplex(b_part.M0.shifted(-1), b_part.M1.shifted(-1), b_part.D0, b_part.D1)
    emb_b, _, _ = _embedding(d, db, map_b, c, 1)
    emb_a, _, _ = _embedding(d, da, map_a, c, 0)
    inc = ChainMap(_placement(len(full.M0), emb_b[0]), _placement(len(full.M1), emb_b[1]))
    proj = ChainMap(_placement(len(full.M0), emb_a[0]).transpose(),
                    _placement(len(full.M1), emb_a[1]).transpose())
    return SkeinDecomposition(full, a_part, b_part, inc, proj)


def skein_is_exact(dec: SkeinDecomposition) -> bool:
    """Both maps are chain maps, their composite vanishes and the bases partition."""
    if not is_chain_map(dec.inclusion, dec.b_part, dec.complex):
        return False
    if not is_chain_map(dec.projection, dec.complex, dec.a_part):
        return False
    if not dec.projection.compose(dec.inclusion).is_zero():
        return False
    for i in (0, 1):
        f = dec.inclusion.f0 if i == 0 else dec.inclusion.f1
        g = dec.projection.f0 if i == 0 else dec.projection.f1
        covered = np.zeros(len(dec.complex.basis(i)), dtype=np.int64)
        for m, axis in ((f, 0), (g, 1)):
            r, cc, _ = m.triplets()
            np.add.at(covered, r if axis == 0 else cc, 1)
        if not np.all(covered == 1):
            return False
        fr, fc, _ = f.triplets()
        gr, gc, _ = g.triplets()
        if not np.array_equal(dec.complex.basis(i).degrees[fr], dec.b_part.basis(i).degrees[fc]):
            return False
        if not np.array_equal(dec.a_part.basis(i).degrees[gr], dec.complex.basis(i).degrees[gc]):
            return False
    return True


def curl_identity_check(d: LinkDiagram, site: int, positive: bool = True) -> bool:
    """Adding a curl on edge ``site`` reflexes the framed homology and shifts it by 3 or -3."""
    from .moves import Move, apply_move

    if not d:
        raise IllegalSite("the empty diagram has no edge for a curl")
    curled = apply_move(d, Move.R1_PLUS if positive else Move.R1_MINUS, site)
    expected = framed_homology(d).reflex().shift(3 if positive else -3)
    return framed_homology(curled) == expected
