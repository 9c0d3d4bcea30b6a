"""Classical Khovanov homology over the integers, built without the framed code.

Generators are ``(state, labels)`` with one ``+1`` (``v_+``) or ``-1``
(``v_-``) per circle. Homological degree is ``b(s) - n_-`` and the
q-degree is ``sum(labels) + b(s) + n_+ - 2 n_-``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import product

from .diagram import LinkDiagram, OrientedDiagram, all_a_circles, edge_sign, resolve, KauffmanState
from .intlinalg import QuotientStructure, SparseIntMatrix, homology_quotient
from .laurent import LaurentPoly, PoincarePoly


class VLabel(Enum):
    v_minus = -1
    v_plus = 1

    @property
    def degree(self) -> int:
        return self.value


def _circle_map(d: LinkDiagram, src, tgt):
    """Source circle -> target circle through shared labels (changed circles excluded)."""
    out = {}
    for i, circ in enumerate(src.circles):
        images = {tgt.circle_of(e) for e in circ}
        if len(images) == 1:
            out[i] = images.pop()
    return out


def edge_map(d: LinkDiagram, s: int, c: int) -> dict[tuple[int, ...], dict[tuple[int, ...], int]]:
    """Unsigned classical map ``d_xi`` for flipping crossing ``c`` of state ``s``.

    Keys and values are label tuples indexed by circle number.
    """
    n = d.n
    src = resolve(d, KauffmanState.from_index(s, n))
    tgt = resolve(d, KauffmanState.from_index(s | (1 << c), n))
    x = d.crossings[c]
    i0, i2 = src.circle_of(x[0]), src.circle_of(x[2])
    stable = _circle_map(d, src, tgt)
    out = {}
    for labels in product((1, -1), repeat=src.size):
        base = [0] * tgt.size
        for i, j in stable.items():
            if i not in (i0, i2):
                base[j] = labels[i]
        image: dict[tuple[int, ...], int] = {}
        if i0 != i2:
            t = tgt.circle_of(x[0])
            a, b = labels[i0], labels[i2]
            if a == 1 and b == 1:
                base[t] = 1
                image[tuple(base)] = 1
            elif a != b:
                base[t] = -1
                image[tuple(base)] = 1
        else:
            t1, t2 = tgt.circle_of(x[0]), tgt.circle_of(x[1])
            if labels[i0] == -1:
                base[t1] = base[t2] = -1
                image[tuple(base)] = 1
            else:
                for u, v in ((1, -1), (-1, 1)):
                    base[t1], base[t2] = u, v
                    image[tuple(base)] = 1
        out[labels] = image
    return out


@dataclass(frozen=True)
class KhovanovComplex:
    """Cochain groups ``C^k`` (generator lists and q-degrees) and maps ``d^k``."""

    generators: dict[int, list[tuple[int, tuple[int, ...]]]]
    degrees: dict[int, list[int]]
    differentials: dict[int, SparseIntMatrix] = field(repr=False)

    def is_complex(self) -> bool:
        for k, m in self.differentials.items():
            nxt = self.differentials.get(k + 1)
            if nxt is not None and not (nxt @ m).is_zero():
                return False
        return True

    def euler_char(self) -> LaurentPoly:
        out: dict[int, int] = {}
        for k, degs in self.degrees.items():
            for q in degs:
                out[q] = out.get(q, 0) + (-1) ** k
        return LaurentPoly(out, "q")


def build_khovanov_complex(od: OrientedDiagram) -> KhovanovComplex:
    d = od.diagram
    n = d.n
    n_plus, n_minus = od.n_plus, od.n_minus
    gens: dict[int, list] = {}
    degs: dict[int, list] = {}
    for s in range(1 << n):
        b = bin(s).count("1")
        k = b - n_minus
        size = resolve(d, KauffmanState.from_index(s, n)).size
        for labels in product((1, -1), repeat=size):
            gens.setdefault(k, []).append((s, labels))
            degs.setdefault(k, []).append(sum(labels) + b + n_plus - 2 * n_minus)
    for k in gens:
        order = sorted(range(len(gens[k])), key=lambda i: gens[k][i])
        gens[k] = [gens[k][i] for i in order]
        degs[k] = [degs[k][i] for i in order]
    index = {k: {g: i for i, g in enumerate(v)} for k, v in gens.items()}
    diffs = {}
    for k in sorted(gens):
        entries: dict[tuple[int, int], int] = {}
        targets = index.get(k + 1, {})
        done = set()
        for s, _ in gens[k]:
            if s in done:
                continue
            done.add(s)
            for c in range(n):
                if (s >> c) & 1:
                    continue
                t = s | (1 << c)
                sign = edge_sign(s, c)
                for labels, image in edge_map(d, s, c).items():
                    col = index[k][(s, labels)]
                    for tl, coef in image.items():
                        key = (targets[(t, tl)], col)
                        entries[key] = entries.get(key, 0) + sign * coef
        diffs[k] = SparseIntMatrix.from_entries(len(targets), len(gens[k]), entries)
    return KhovanovComplex(gens, degs, diffs)


@dataclass(frozen=True)
class KhovanovHomology:
    """Nonzero groups keyed by ``(k, q)``."""

    groups: tuple[tuple[tuple[int, int], QuotientStructure], ...]

    def as_dict(self) -> dict[tuple[int, int], QuotientStructure]:
        return dict(self.groups)

    def __getitem__(self, key):
        return self.as_dict().get(key, QuotientStructure())

    def __iter__(self):
        return iter(self.groups)

    def poincare(self) -> PoincarePoly:
        return PoincarePoly({k: g.rank for k, g in self.groups if g.rank}, "q")

    def torsion_table(self) -> dict[tuple[int, int], tuple[int, ...]]:
        return {k: g.torsion for k, g in self.groups if g.torsion}


def khovanov_homology(od: OrientedDiagram) -> KhovanovHomology:
    cx = build_khovanov_complex(od)
    groups = {}
    for k, degs in cx.degrees.items():
        prev_degs = cx.degrees.get(k - 1, [])
        next_degs = cx.degrees.get(k + 1, [])
        d_out = cx.differentials[k]
        d_in = cx.differentials.get(k - 1)
        for q in sorted(set(degs)):
            here = [i for i, x in enumerate(degs) if x == q]
            nxt = [i for i, x in enumerate(next_degs) if x == q]
            prv = [i for i, x in enumerate(prev_degs) if x == q]
            a = d_out.submatrix(nxt, here)
            b = d_in.submatrix(here, prv) if d_in is not None else SparseIntMatrix(len(here), 0)
            g = homology_quotient(a, b)
            if g:
                groups[(k, q)] = g
    return KhovanovHomology(tuple(sorted(groups.items())))


def alpha_square_check(d: LinkDiagram) -> bool:
    """``alpha`` (``w_+ -> v_-``, ``w_- -> v_+``) intertwines every framed and classical edge map."""
    from .framedcube import CubeLayout, _edge_entries

    layout = CubeLayout(d)
    n = d.n
    for s in range(1 << n):
        k = int(layout.counts[s])
        for c in range(n):
            if (s >> c) & 1:
                continue
            t = s | (1 << c)
            kt = int(layout.counts[t])
            src, tgt, val = _edge_entries(layout, s, c)
            sign = edge_sign(s, c)
            framed: dict[int, dict[tuple, int]] = {}
            for a, b, v in zip(src.tolist(), tgt.tolist(), val.tolist()):
                key = tuple(-1 if (b >> u) & 1 else 1 for u in range(kt))
                row = framed.setdefault(a, {})
                row[key] = row.get(key, 0) + v * sign
            classical = edge_map(d, s, c)
            for mask in range(1 << k):
                alpha = tuple(-1 if (mask >> u) & 1 else 1 for u in range(k))
                lhs = {g: v for g, v in framed.get(mask, {}).items() if v}
                if lhs != classical[alpha]:
                    return False
    return True


# -- comparison with the oriented framed invariant ---------------------------


@dataclass(frozen=True)
class Teo1Report:
    parity_offset: int
    components: int
    rows: tuple[dict, ...]
    regrouped_match: bool
    mod4_form_match: bool

    @property
    def match(self) -> bool:
        return self.regrouped_match and self.mod4_form_match

    def mismatches(self) -> list[dict]:
        return [r for r in self.rows if not (r["match"] and r["mod4_match"])]


def regroup(kh: KhovanovHomology, offset: int) -> dict[tuple[int, int], QuotientStructure]:
    """Collect ``H^{k,q}`` into ``(i, j) = ((k + offset) mod 2, -2q)``."""
    out: dict[tuple[int, int], QuotientStructure] = {}
    for (k, q), g in kh.groups:
        key = ((k + offset) % 2, -2 * q)
        out[key] = out.get(key, QuotientStructure()) + g
    return out


def regroup_mod4(kh: KhovanovHomology) -> dict[tuple[int, int], QuotientStructure]:
    """The first form: parity ``k`` when ``-2q`` is in 4Z, ``k + 1`` otherwise."""
    out: dict[tuple[int, int], QuotientStructure] = {}
    for (k, q), g in kh.groups:
        j = -2 * q
        i = k % 2 if j % 4 == 0 else (k + 1) % 2
        out[(i, j)] = out.get((i, j), QuotientStructure()) + g
    return out


def teo1_compare(od: OrientedDiagram, oriented=None) -> Teo1Report:
    """Compare the oriented invariant with regrouped Khovanov homology per bidegree."""
    from .oriented import oriented_homology

    if oriented is None:
        oriented = oriented_homology(od)
    kh = khovanov_homology(od)
    offset = od.n_plus + all_a_circles(od.diagram)
    left = oriented.as_dict()
    right = regroup(kh, offset)
    right4 = regroup_mod4(kh)
    rows = []
    for key in sorted(set(left) | set(right) | set(right4)):
        a = left.get(key, QuotientStructure())
        b = right.get(key, QuotientStructure())
        c = right4.get(key, QuotientStructure())
        rows.append({
            "parity": key[0], "degree": key[1],
            "oriented": str(a), "khovanov": str(b), "khovanov_mod4": str(c),
            "match": a == b, "mod4_match": a == c,
        })
    return Teo1Report(
        offset, od.components, tuple(rows),
        all(r["match"] for r in rows), all(r["mod4_match"] for r in rows),
    )
