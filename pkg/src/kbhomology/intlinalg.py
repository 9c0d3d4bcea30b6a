"""Exact integer linear algebra: sparse matrices, Smith normal form and
homology of ``ker dA / im dB``.

Elimination always runs in Python integers. Pivots of value +-1 are used
first, chosen by a Markowitz-style cost; whatever is left is diagonalized
by a gcd-driven sparse elimination.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import CompositeNotZero, ShapeMismatch


class SparseIntMatrix:
    """Immutable ``rows x cols`` integer matrix stored as sorted COO arrays.

    Values live in an int64 array when they fit and in an object array of
    Python ints otherwise.
    """

    __slots__ = ("rows", "cols", "_r", "_c", "_v")

    def __init__(self, rows: int, cols: int, r=None, c=None, v=None, *, _trusted=False):
        self.rows = int(rows)
        self.cols = int(cols)
        if r is None:
            r = c = np.zeros(0, dtype=np.int64)
            v = np.zeros(0, dtype=np.int64)
        if not _trusted:
            r = np.asarray(r, dtype=np.int64)
            c = np.asarray(c, dtype=np.int64)
            v = _as_values(v)
            if r.shape != c.shape or r.shape != v.shape:
                raise ShapeMismatch("row, column and value arrays differ in length")
            if r.size and (r.min() < 0 or r.max() >= self.rows or c.min() < 0 or c.max() >= self.cols):
                raise ShapeMismatch("entry index out of range")
            r, c, v = _coalesce(r, c, v, self.cols)
        self._r, self._c, self._v = r, c, v

    # -- construction ---------------------------------------------------

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Mapping[tuple[int, int], int]):
        items = [(i, j, int(x)) for (i, j), x in entries.items() if x]
        if not items:
            return cls(rows, cols)
        r, c, v = zip(*items)
        return cls(rows, cols, r, c, list(v))

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], cols: int | None = None):
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        entries = {(i, j): int(x) for i, row in enumerate(data) for j, x in enumerate(row) if x}
        return cls.from_entries(rows, cols, entries)

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int):
        idx = np.arange(n, dtype=np.int64)
        return cls(n, n, idx, idx, np.ones(n, dtype=np.int64), _trusted=True)

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int | None = None, cols: int | None = None):
        k = len(values)
        return cls.from_entries(rows if rows is not None else k, cols if cols is not None else k,
                                {(i, i): x for i, x in enumerate(values)})

    # -- access ---------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return int(self._r.size)

    @property
    def entries(self) -> dict[tuple[int, int], int]:
        return {(int(i), int(j)): int(x) for i, j, x in zip(self._r, self._c, self._v)}

    def triplets(self):
        return self._r, self._c, self._v

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        lo = np.searchsorted(self._r, i, side="left")
        hi = np.searchsorted(self._r, i, side="right")
        k = lo + np.searchsorted(self._c[lo:hi], j)
        if k < hi and self._c[k] == j:
            return int(self._v[k])
        return 0

    def is_zero(self) -> bool:
        return self.nnz == 0

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), x in self.entries.items():
            out[i][j] = x
        return out

    def row_dicts(self) -> dict[int, dict[int, int]]:
        rows: dict[int, dict[int, int]] = {}
        for i, j, x in zip(self._r.tolist(), self._c.tolist(), self._v.tolist()):
            rows.setdefault(i, {})[j] = int(x)
        return rows

    def __eq__(self, other):
        if not isinstance(other, SparseIntMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self._r, other._r)
            and np.array_equal(self._c, other._c)
            and all(int(a) == int(b) for a, b in zip(self._v, other._v))
        )

    def __hash__(self):
        return hash((self.shape, self.nnz))

    def __repr__(self):
        return f"SparseIntMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    # -- algebra --------------------------------------------------------

    def transpose(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.cols, self.rows, self._c, self._r, self._v)

    def __neg__(self):
        return SparseIntMatrix(self.rows, self.cols, self._r, self._c, -self._v, _trusted=True)

    def scale(self, k: int) -> "SparseIntMatrix":
        if k == 0:
            return SparseIntMatrix(self.rows, self.cols)
        return SparseIntMatrix(self.rows, self.cols, self._r, self._c, _as_values(self._v) * k)

    def __add__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot add {self.shape} and {other.shape}")
        return SparseIntMatrix(
            self.rows,
            self.cols,
            np.concatenate([self._r, other._r]),
            np.concatenate([self._c, other._c]),
            _concat_values(self._v, other._v),
        )

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        if not self.nnz or not other.nnz:
            return SparseIntMatrix(self.rows, other.cols)
        if self._v.dtype != object and other._v.dtype != object:
            bound = int(np.abs(self._v).max()) * int(np.abs(other._v).max()) * max(self.cols, 1)
            if bound < (1 << 62):
                return _matmul_fast(self, other)
        right = other.row_dicts()
        acc: dict[tuple[int, int], int] = {}
        for i, k, x in zip(self._r.tolist(), self._c.tolist(), self._v.tolist()):
            for j, y in right.get(k, {}).items():
                acc[(i, j)] = acc.get((i, j), 0) + int(x) * y
        return SparseIntMatrix.from_entries(self.rows, other.cols, acc)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "SparseIntMatrix":
        """Rows ``row_idx`` and columns ``col_idx`` in the given orders."""
        rmap = np.full(self.rows, -1, dtype=np.int64)
        cmap = np.full(self.cols, -1, dtype=np.int64)
        row_idx = np.asarray(row_idx, dtype=np.int64)
        col_idx = np.asarray(col_idx, dtype=np.int64)
        rmap[row_idx] = np.arange(row_idx.size)
        cmap[col_idx] = np.arange(col_idx.size)
        rr, cc = rmap[self._r], cmap[self._c]
        keep = (rr >= 0) & (cc >= 0)
        return SparseIntMatrix(row_idx.size, col_idx.size, rr[keep], cc[keep], self._v[keep])

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "SparseIntMatrix":
        """Entry ``(i, j)`` moves to ``(row_perm[i], col_perm[j])``."""
        rp = np.asarray(row_perm, dtype=np.int64)
        cp = np.asarray(col_perm, dtype=np.int64)
        return SparseIntMatrix(self.rows, self.cols, rp[self._r], cp[self._c], self._v)

    def signed(self, row_signs: Sequence[int] | None = None, col_signs: Sequence[int] | None = None):
        v = _as_values(self._v).copy()
        if row_signs is not None:
            v = v * np.asarray(row_signs, dtype=np.int64)[self._r]
        if col_signs is not None:
            v = v * np.asarray(col_signs, dtype=np.int64)[self._c]
        return SparseIntMatrix(self.rows, self.cols, self._r, self._c, v, _trusted=True)


def _as_values(v) -> np.ndarray:
    if isinstance(v, np.ndarray) and v.dtype in (np.int64, object):
        return v
    vals = list(v) if not isinstance(v, np.ndarray) else v.tolist()
    if all(-(1 << 62) < int(x) < (1 << 62) for x in vals):
        return np.asarray(vals, dtype=np.int64).reshape(-1)
    arr = np.empty(len(vals), dtype=object)
    arr[:] = [int(x) for x in vals]
    return arr


def _concat_values(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    small = a.dtype != object and b.dtype != object
    if small and (a.size == 0 or int(np.abs(a).max()) < (1 << 60)) and (b.size == 0 or int(np.abs(b).max()) < (1 << 60)):
        return np.concatenate([a, b])
    out = np.empty(a.size + b.size, dtype=object)
    out[:] = [int(x) for x in a] + [int(x) for x in b]
    return out


def _coalesce(r, c, v, ncols):
    if not r.size:
        return r, c, v
    key = r * max(ncols, 1) + c
    order = np.argsort(key, kind="stable")
    key, r, c, v = key[order], r[order], c[order], v[order]
    if np.any(key[1:] == key[:-1]):
        uniq, start = np.unique(key, return_index=True)
        if v.dtype == object:
            sums = np.empty(uniq.size, dtype=object)
            bounds = list(start) + [key.size]
            sums[:] = [sum(int(x) for x in v[bounds[i]:bounds[i + 1]]) for i in range(uniq.size)]
        else:
            sums = np.add.reduceat(v, start)
        r, c, v = r[start], c[start], sums
    nz = v != 0
    if v.dtype == object:
        nz = np.array([int(x) != 0 for x in v], dtype=bool)
    return r[nz], c[nz], v[nz]


def _matmul_fast(a: SparseIntMatrix, b: SparseIntMatrix) -> SparseIntMatrix:
    # expand all (a_ik, b_kj) pairs by sorting b on its row index
    br, bc, bv = b._r, b._c, b._v
    starts = np.searchsorted(br, np.arange(b.rows + 1))
    counts = starts[a._c + 1] - starts[a._c]
    total = int(counts.sum())
    if total == 0:
        return SparseIntMatrix(a.rows, b.cols)
    rep_r = np.repeat(a._r, counts)
    rep_v = np.repeat(a._v, counts)
    offsets = np.repeat(starts[a._c] - np.concatenate([[0], np.cumsum(counts)[:-1]]), counts)
    idx = np.arange(total) + offsets
    return SparseIntMatrix(a.rows, b.cols, rep_r, bc[idx], rep_v * bv[idx])


# -- Smith normal form ----------------------------------------------------


@dataclass(frozen=True)
class SmithForm:
    """Invariant factors ``d_1 | d_2 | ... | d_r`` of an integer matrix."""

    factors: tuple[int, ...]
    shape: tuple[int, int] = (0, 0)
    left: SparseIntMatrix | None = field(default=None, compare=False)
    right: SparseIntMatrix | None = field(default=None, compare=False)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.factors if d > 1)

    def diagonal_matrix(self) -> SparseIntMatrix:
        return SparseIntMatrix.diagonal(self.factors, *self.shape)


class UnitReduction(NamedTuple):
    matrix: SparseIntMatrix
    pivots: int


def _unit_eliminate(rows: dict[int, dict[int, int]], cols: dict[int, set[int]]) -> int:
    """Eliminate +-1 pivots in place (Schur complement); returns their count."""
    heap = [(len(rw), i) for i, rw in rows.items()]
    heapq.heapify(heap)
    count = 0
    while heap:
        length, i = heapq.heappop(heap)
        rw = rows.get(i)
        if rw is None:
            continue
        if len(rw) != length:
            heapq.heappush(heap, (len(rw), i))
            continue
        best = None
        for j, x in rw.items():
            if x == 1 or x == -1:
                cost = len(cols[j])
                if best is None or cost < best[0]:
                    best = (cost, j, x)
                    if cost == 1:
                        break
        if best is None:
            continue
        _, j, x = best
        pivot_row = rw
        for k in list(cols[j]):
            if k == i:
                continue
            target = rows[k]
            factor = target[j] * x
            for jj, y in pivot_row.items():
                new = target.get(jj, 0) - factor * y
                if new:
                    if jj not in target:
                        cols[jj].add(k)
                    target[jj] = new
                else:
                    del target[jj]
                    cols[jj].discard(k)
            if target:
                heapq.heappush(heap, (len(target), k))
            else:
                del rows[k]
        for jj in pivot_row:
            cols[jj].discard(i)
            if not cols[jj]:
                del cols[jj]
        del rows[i]
        count += 1
    return count


def _general_diagonalize(rows: dict[int, dict[int, int]], cols: dict[int, set[int]]) -> list[int]:
    """Diagonalize what is left by repeated division with a minimal pivot."""
    diag = []
    while rows:
        best = None
        for i, rw in rows.items():
            for j, x in rw.items():
                ax = abs(x)
                if best is None or ax < best[0]:
                    best = (ax, i, j)
                    if ax == 1:
                        break
            if best is not None and best[0] == 1:
                break
        _, i, j = best
        while True:
            v = rows[i][j]
            clean = True
            # row operations clear column j below the pivot
            for k in list(cols[j]):
                if k == i:
                    continue
                q = rows[k][j] // v
                _axpy_row(rows, cols, k, i, -q)
                if j in rows.get(k, {}):
                    clean = False
            # column operations clear row i
            for jj in list(rows[i]):
                if jj == j:
                    continue
                q = rows[i][jj] // v
                _axpy_col(rows, cols, jj, j, -q)
                if jj in rows[i]:
                    clean = False
            if clean:
                break
            # a remainder survived; move the pivot to the smallest entry in its cross
            cand = [(abs(rows[k][j]), k, j) for k in cols[j]] + [(abs(x), i, jj) for jj, x in rows[i].items()]
            _, i, j = min(cand)
        diag.append(abs(rows[i][j]))
        del rows[i]
        cols[j].discard(i)
        if not cols[j]:
            del cols[j]
    return diag


def _axpy_row(rows, cols, target: int, source: int, q: int):
    if not q:
        return
    tr = rows[target]
    for jj, y in rows[source].items():
        new = tr.get(jj, 0) + q * y
        if new:
            if jj not in tr:
                cols.setdefault(jj, set()).add(target)
            tr[jj] = new
        else:
            del tr[jj]
            cols[jj].discard(target)
            if not cols[jj]:
                del cols[jj]
    if not tr:
        del rows[target]


def _axpy_col(rows, cols, target: int, source: int, q: int):
    if not q:
        return
    for k in list(cols.get(source, ())):
        rk = rows[k]
        new = rk.get(target, 0) + q * rk[source]
        if new:
            if target not in rk:
                cols.setdefault(target, set()).add(k)
            rk[target] = new
        else:
            del rk[target]
            cols[target].discard(k)
            if not cols[target]:
                del cols[target]


def invariant_factors(diagonal: Iterable[int]) -> tuple[int, ...]:
    """Turn any nonzero diagonal into a divisibility chain."""
    d = sorted(abs(x) for x in diagonal if x)
    units = [x for x in d if x == 1]
    rest = [x for x in d if x != 1]
    changed = True
    while changed:
        changed = False
        for a in range(len(rest)):
            for b in range(a + 1, len(rest)):
                x, y = rest[a], rest[b]
                if y % x:
                    g = gcd(x, y)
                    rest[a], rest[b] = g, x // g * y
                    changed = True
        rest.sort()
    ones = [x for x in rest if x == 1]
    return tuple(units + ones + [x for x in rest if x != 1])


def _to_dicts(m: SparseIntMatrix):
    rows = m.row_dicts()
    cols: dict[int, set[int]] = {}
    for i, rw in rows.items():
        for j in rw:
            cols.setdefault(j, set()).add(i)
    return rows, cols


def smith_normal_form(m: SparseIntMatrix, track_transforms: bool = False) -> SmithForm:
    """Invariant factors of ``m``.

    With ``track_transforms`` the dense algorithm also returns unimodular
    ``left`` and ``right`` with ``left @ m @ right`` diagonal.
    """
    if track_transforms:
        return _dense_smith(m)
    rows, cols = _to_dicts(m)
    units = _unit_eliminate(rows, cols)
    diag = _general_diagonalize(rows, cols)
    return SmithForm(invariant_factors([1] * units + diag), m.shape)


def rank(m: SparseIntMatrix) -> int:
    return smith_normal_form(m).rank


def unit_pivot_reduce(m: SparseIntMatrix) -> UnitReduction:
    """Remove all +-1 pivots; the result has the same non-unit Smith factors."""
    rows, cols = _to_dicts(m)
    count = _unit_eliminate(rows, cols)
    live_rows = sorted(rows)
    live_cols = sorted(cols)
    ri = {i: k for k, i in enumerate(live_rows)}
    ci = {j: k for k, j in enumerate(live_cols)}
    entries = {(ri[i], ci[j]): x for i, rw in rows.items() for j, x in rw.items()}
    # rows/columns that became zero stay as zero rows/columns of the residual
    zero_rows = m.rows - count - len(live_rows)
    zero_cols = m.cols - count - len(live_cols)
    out = SparseIntMatrix.from_entries(len(live_rows) + zero_rows, len(live_cols) + zero_cols, entries)
    return UnitReduction(out, count)


def _dense_smith(m: SparseIntMatrix) -> SmithForm:
    a = m.to_dense()
    nr, nc = m.shape
    left = [[int(i == j) for j in range(nr)] for i in range(nr)]
    right = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        left[i], left[k] = left[k], left[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in right:
            row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + q * y for x, y in zip(left[dst], left[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in right:
            row[dst] += q * row[src]

    t = 0
    while t < min(nr, nc):
        nz = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        done = False
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        done = False
            if done:
                # enforce divisibility against the remaining block
                bad = [(i, j) for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % a[t][t]]
                if not bad:
                    break
                add_row(t, bad[0][0], 1)
                continue
            nz = [(abs(a[i][t]), i, t) for i in range(t, nr) if a[i][t]]
            nz += [(abs(a[t][j]), t, j) for j in range(t, nc) if a[t][j]]
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
        t += 1
    factors = tuple(a[k][k] for k in range(t))
    return SmithForm(
        factors,
        m.shape,
        SparseIntMatrix.from_dense(left, nr),
        SparseIntMatrix.from_dense(right, nc),
    )


# -- homology of a composable pair -----------------------------------------


def elementary_divisors(torsion: Iterable[int]) -> tuple[int, ...]:
    """Prime-power decomposition, sorted; canonical for direct sums."""
    out = []
    for d in torsion:
        n = d
        p = 2
        while p * p <= n:
            if n % p == 0:
                q = 1
                while n % p == 0:
                    n //= p
                    q *= p
                out.append(q)
            p += 1
        if n > 1:
            out.append(n)
    return tuple(sorted(out))


def torsion_from_elementary(divisors: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors from prime-power elementary divisors."""
    by_prime: dict[int, list[int]] = {}
    for q in divisors:
        p = 2
        while q % p and p * p <= q:
            p += 1
        if q % p:
            p = q
        by_prime.setdefault(p, []).append(q)
    longest = max((len(v) for v in by_prime.values()), default=0)
    factors = [1] * longest
    for powers in by_prime.values():
        powers.sort(reverse=True)
        for k, q in enumerate(powers):
            factors[longest - 1 - k] *= q
    return tuple(f for f in factors if f > 1)


@dataclass(frozen=True)
class QuotientStructure:
    """A finitely generated abelian group ``Z^rank + sum Z/t``."""

    rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        # gcd/lcm normalization avoids factoring large coefficients
        object.__setattr__(self, "torsion", tuple(t for t in invariant_factors(self.torsion) if t > 1))

    def __bool__(self):
        return bool(self.rank or self.torsion)

    def __add__(self, other: "QuotientStructure") -> "QuotientStructure":
        return QuotientStructure(self.rank + other.rank, self.torsion + other.torsion)

    def __str__(self):
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        counts: dict[int, int] = {}
        for t in self.torsion:
            counts[t] = counts.get(t, 0) + 1
        for t, k in sorted(counts.items()):
            parts.append(f"Z_{t}" if k == 1 else f"Z_{t}^{k}")
        return " + ".join(parts) or "0"


def homology_from_smith(dim: int, out_form: SmithForm, in_form: SmithForm) -> QuotientStructure:
    return QuotientStructure(dim - out_form.rank - in_form.rank, in_form.torsion)


def homology_quotient(dA: SparseIntMatrix, dB: SparseIntMatrix, check: bool = True) -> QuotientStructure:
    """``ker dA / im dB`` where ``dB`` lands in the domain of ``dA``.

    ``ker dA`` is saturated in the domain, so the torsion of the quotient is
    the torsion of ``coker dB`` and the rank is ``dim - rk dA - rk dB``.
    """
    if dA.cols != dB.rows:
        raise ShapeMismatch(f"dA is {dA.shape} but dB is {dB.shape}")
    if check and not (dA @ dB).is_zero():
        raise CompositeNotZero("dA @ dB is not zero")
    return homology_from_smith(dA.cols, smith_normal_form(dA), smith_normal_form(dB))
