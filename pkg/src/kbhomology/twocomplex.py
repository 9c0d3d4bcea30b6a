"""2-complexes of graded free abelian groups.

A 2-complex is ``(M0, M1, D0, D1)`` with ``D0: M0 -> M1`` and
``D1: M1 -> M0`` of q-degree zero and both composites vanishing. Matrices
act on column vectors, so ``D0`` has shape ``(len(M1), len(M0))``.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import NotAComplex
from .intlinalg import QuotientStructure, SmithForm, SparseIntMatrix, smith_normal_form
from .laurent import LaurentPoly, PoincarePoly


class GradedBasis:
    """Ordered generators, each with a q-degree and an optional provenance key.

    Keys may be a sequence of hashables or a 2-D integer array with one row
    per generator (the compact form used by large cubes).
    """

    __slots__ = ("degrees", "keys")

    def __init__(self, degrees: Iterable[int] = (), keys=None):
        if not isinstance(degrees, np.ndarray):
            degrees = list(degrees)
        self.degrees = np.asarray(degrees, dtype=np.int64).reshape(-1)
        if keys is not None:
            if not isinstance(keys, np.ndarray):
                keys = tuple(keys)
            if len(keys) != self.degrees.size:
                raise ValueError("one key per generator is required")
        self.keys = keys

    def __len__(self):
        return int(self.degrees.size)

    def __eq__(self, other):
        if not isinstance(other, GradedBasis):
            return NotImplemented
        if not np.array_equal(self.degrees, other.degrees):
            return False
        if isinstance(self.keys, np.ndarray) and isinstance(other.keys, np.ndarray):
            return np.array_equal(self.keys, other.keys)
        return self.key_list() == other.key_list()

    def __repr__(self):
        return f"GradedBasis({len(self)} generators)"

    def qdim(self) -> LaurentPoly:
        vals, counts = np.unique(self.degrees, return_counts=True)
        return LaurentPoly({int(v): int(k) for v, k in zip(vals, counts)})

    def shifted(self, k: int) -> "GradedBasis":
        return GradedBasis(self.degrees + k, self.keys)

    def key_list(self) -> list:
        if self.keys is None:
            return list(range(len(self)))
        if isinstance(self.keys, np.ndarray):
            return [tuple(int(v) for v in row) for row in self.keys]
        return list(self.keys)


@dataclass(frozen=True, eq=False)
class TwoComplex:
    M0: GradedBasis
    M1: GradedBasis
    D0: SparseIntMatrix
    D1: SparseIntMatrix

    def __post_init__(self):
        if self.D0.shape != (len(self.M1), len(self.M0)):
            raise ValueError(f"D0 has shape {self.D0.shape}, expected {(len(self.M1), len(self.M0))}")
        if self.D1.shape != (len(self.M0), len(self.M1)):
            raise ValueError(f"D1 has shape {self.D1.shape}, expected {(len(self.M0), len(self.M1))}")

    def __eq__(self, other):
        if not isinstance(other, TwoComplex):
            return NotImplemented
        return (self.M0 == other.M0 and self.M1 == other.M1
                and self.D0 == other.D0 and self.D1 == other.D1)

    def same_shape(self, other: "TwoComplex") -> bool:
        """Equality ignoring provenance keys."""
        return (np.array_equal(self.M0.degrees, other.M0.degrees)
                and np.array_equal(self.M1.degrees, other.M1.degrees)
                and self.D0 == other.D0 and self.D1 == other.D1)

    def __repr__(self):
        return (f"TwoComplex(M0={len(self.M0)}, M1={len(self.M1)}, "
                f"nnz D0={self.D0.nnz}, nnz D1={self.D1.nnz})")

    def basis(self, i: int) -> GradedBasis:
        return self.M0 if i == 0 else self.M1

    def differential(self, i: int) -> SparseIntMatrix:
        return self.D0 if i == 0 else self.D1

    def rebased(self, order0, order1, signs0=None, signs1=None) -> "TwoComplex":
        """New generator ``k`` of ``M_i`` is ``signs_i[k]`` times old generator ``order_i[k]``."""
        order0 = np.asarray(order0, dtype=np.int64)
        order1 = np.asarray(order1, dtype=np.int64)
        inv0 = np.empty_like(order0)
        inv0[order0] = np.arange(order0.size)
        inv1 = np.empty_like(order1)
        inv1[order1] = np.arange(order1.size)
        s0 = np.ones(order0.size, dtype=np.int64) if signs0 is None else np.asarray(signs0, dtype=np.int64)
        s1 = np.ones(order1.size, dtype=np.int64) if signs1 is None else np.asarray(signs1, dtype=np.int64)
        d0 = self.D0.permuted(inv1, inv0).signed(s1, s0)
        d1 = self.D1.permuted(inv0, inv1).signed(s0, s1)
        k0 = [self.M0.key_list()[i] for i in order0]
        k1 = [self.M1.key_list()[i] for i in order1]
        return TwoComplex(GradedBasis(self.M0.degrees[order0], k0), GradedBasis(self.M1.degrees[order1], k1), d0, d1)


def zero_complex() -> TwoComplex:
    empty = GradedBasis()
    return TwoComplex(empty, empty, SparseIntMatrix(0, 0), SparseIntMatrix(0, 0))


def unit_complex() -> TwoComplex:
    """``Z`` in parity 0 and degree 0: the unit for the tensor product."""
    return TwoComplex(GradedBasis([0], [()]), GradedBasis(keys=()), SparseIntMatrix(0, 1), SparseIntMatrix(1, 0))


def _degree_zero(d: SparseIntMatrix, target: GradedBasis, source: GradedBasis) -> bool:
    r, c, _ = d.triplets()
    return bool(np.array_equal(target.degrees[r], source.degrees[c]))


def verify_complex(x: TwoComplex) -> bool:
    """Both composites vanish and both differentials have degree zero."""
    if not _degree_zero(x.D0, x.M1, x.M0) or not _degree_zero(x.D1, x.M0, x.M1):
        return False
    return (x.D1 @ x.D0).is_zero() and (x.D0 @ x.D1).is_zero()


def reflex(x: TwoComplex) -> TwoComplex:
    return TwoComplex(x.M1, x.M0, x.D1, x.D0)


def reflex_power(x: TwoComplex, n: int) -> TwoComplex:
    return reflex(x) if n % 2 else x


def shift(x: TwoComplex, k: int) -> TwoComplex:
    return TwoComplex(x.M0.shifted(k), x.M1.shifted(k), x.D0, x.D1)


def _concat_basis(a: GradedBasis, b: GradedBasis, tag_a=None, tag_b=None) -> GradedBasis:
    ka, kb = a.key_list(), b.key_list()
    if tag_a is not None:
        ka = [(tag_a, k) for k in ka]
        kb = [(tag_b, k) for k in kb]
    return GradedBasis(np.concatenate([a.degrees, b.degrees]), ka + kb)


def _block(blocks: list[list[SparseIntMatrix | None]], row_sizes, col_sizes) -> SparseIntMatrix:
    rs, cs, vs = [], [], []
    roff = 0
    for bi, row in enumerate(blocks):
        coff = 0
        for bj, m in enumerate(row):
            if m is not None and m.nnz:
                r, c, v = m.triplets()
                rs.append(r + roff)
                cs.append(c + coff)
                vs.append(v)
            coff += col_sizes[bj]
        roff += row_sizes[bi]
    if not rs:
        return SparseIntMatrix(sum(row_sizes), sum(col_sizes))
    vals = np.concatenate(vs) if all(v.dtype != object for v in vs) else [int(x) for v in vs for x in v]
    return SparseIntMatrix(sum(row_sizes), sum(col_sizes), np.concatenate(rs), np.concatenate(cs), vals)


def direct_sum(x: TwoComplex, y: TwoComplex) -> TwoComplex:
    m0 = _concat_basis(x.M0, y.M0)
    m1 = _concat_basis(x.M1, y.M1)
    d0 = _block([[x.D0, None], [None, y.D0]], [len(x.M1), len(y.M1)], [len(x.M0), len(y.M0)])
    d1 = _block([[x.D1, None], [None, y.D1]], [len(x.M0), len(y.M0)], [len(x.M1), len(y.M1)])
    return TwoComplex(m0, m1, d0, d1)


def _kron(a: SparseIntMatrix, b: SparseIntMatrix) -> SparseIntMatrix:
    """Kronecker product with left-factor-major indexing."""
    ar, ac, av = a.triplets()
    br, bc, bv = b.triplets()
    if not ar.size or not br.size:
        return SparseIntMatrix(a.rows * b.rows, a.cols * b.cols)
    r = (ar[:, None] * b.rows + br[None, :]).ravel()
    c = (ac[:, None] * b.cols + bc[None, :]).ravel()
    v = (av[:, None] * bv[None, :]).ravel()
    return SparseIntMatrix(a.rows * b.rows, a.cols * b.cols, r, c, v)


def _tensor_basis(a: GradedBasis, b: GradedBasis) -> GradedBasis:
    deg = (a.degrees[:, None] + b.degrees[None, :]).ravel()
    keys = [(ka, kb) for ka in a.key_list() for kb in b.key_list()]
    return GradedBasis(deg, keys)


def tensor(x: TwoComplex, y: TwoComplex) -> TwoComplex:
    """``(X0Y0 + X1Y1, X0Y1 + X1Y0)`` with the Koszul-signed differentials.

    On ``X_i (x) Y_k`` the differential is ``dX (x) id + (-1)^i id (x) dY``.
    """
    idx = {0: SparseIntMatrix.identity(len(x.M0)), 1: SparseIntMatrix.identity(len(x.M1))}
    idy = {0: SparseIntMatrix.identity(len(y.M0)), 1: SparseIntMatrix.identity(len(y.M1))}
    n = {("x", 0): len(x.M0), ("x", 1): len(x.M1), ("y", 0): len(y.M0), ("y", 1): len(y.M1)}
    t0 = [(0, 0), (1, 1)]
    t1 = [(0, 1), (1, 0)]

    def piece(src, dst):
        (i, k), (i2, k2) = src, dst
        if i2 != i and k2 == k:
            return _kron(x.differential(i), idy[k])
        if i2 == i and k2 != k:
            m = _kron(idx[i], y.differential(k))
            return -m if i == 1 else m
        return None

    def assemble(srcs, dsts):
        blocks = [[piece(s, d) for s in srcs] for d in dsts]
        rows = [n[("x", i)] * n[("y", k)] for i, k in dsts]
        cols = [n[("x", i)] * n[("y", k)] for i, k in srcs]
        return _block(blocks, rows, cols)

    def basis(parts):
        out = GradedBasis(keys=())
        for i, k in parts:
            tb = _tensor_basis(x.basis(i), y.basis(k))
            out = GradedBasis(np.concatenate([out.degrees, tb.degrees]), out.key_list() + tb.key_list())
        return out

    return TwoComplex(basis(t0), basis(t1), assemble(t0, t1), assemble(t1, t0))


def euler_char(x: TwoComplex) -> LaurentPoly:
    """``qdim M0 - qdim M1`` in the variable ``A``."""
    return x.M0.qdim() - x.M1.qdim()


# -- homology ---------------------------------------------------------------


@dataclass(frozen=True)
class GradedHomology:
    """Nonzero groups ``H_{i,j}`` keyed by ``(parity, q-degree)``."""

    groups: tuple[tuple[tuple[int, int], QuotientStructure], ...]

    @classmethod
    def from_dict(cls, groups: dict[tuple[int, int], QuotientStructure]) -> "GradedHomology":
        return cls(tuple(sorted((k, v) for k, v in groups.items() if v)))

    def as_dict(self) -> dict[tuple[int, int], QuotientStructure]:
        return dict(self.groups)

    def __getitem__(self, key: tuple[int, int]) -> QuotientStructure:
        return self.as_dict().get(key, QuotientStructure())

    def __iter__(self):
        return iter(self.groups)

    def __bool__(self):
        return bool(self.groups)

    def reflex(self, times: int = 1) -> "GradedHomology":
        if times % 2 == 0:
            return self
        return GradedHomology.from_dict({(1 - i, j): g for (i, j), g in self.groups})

    def shift(self, k: int) -> "GradedHomology":
        return GradedHomology.from_dict({(i, j + k): g for (i, j), g in self.groups})

    def degrees(self) -> list[int]:
        return sorted({j for (_, j), _ in self.groups})

    def poincare(self, var: str = "A") -> PoincarePoly:
        return PoincarePoly({(i, j): g.rank for (i, j), g in self.groups if g.rank}, var)

    def euler_char(self) -> LaurentPoly:
        out: dict[int, int] = {}
        for (i, j), g in self.groups:
            out[j] = out.get(j, 0) + (-1) ** i * g.rank
        return LaurentPoly(out)

    def torsion_table(self) -> dict[tuple[int, int], tuple[int, ...]]:
        return {k: g.torsion for k, g in self.groups if g.torsion}


def _local_blocks(d: SparseIntMatrix, row_deg: np.ndarray, col_deg: np.ndarray):
    """Split a degree-0 matrix into per-degree blocks with local indices."""
    def local_index(deg):
        order = np.argsort(deg, kind="stable")
        sd = deg[order]
        starts = np.searchsorted(sd, sd, side="left")
        local = np.empty_like(order)
        local[order] = np.arange(order.size) - starts
        return local

    rl, cl = local_index(row_deg), local_index(col_deg)
    r, c, v = d.triplets()
    if not r.size:
        return {}
    deg = col_deg[c]
    order = np.argsort(deg, kind="stable")
    deg, r, c, v = deg[order], r[order], c[order], v[order]
    uniq, start = np.unique(deg, return_index=True)
    bounds = list(start) + [deg.size]
    out = {}
    for k, j in enumerate(uniq.tolist()):
        sl = slice(bounds[k], bounds[k + 1])
        out[j] = (rl[r[sl]], cl[c[sl]], v[sl])
    return out


def _block_factors(args) -> tuple[SmithForm, SmithForm, bool]:
    (nr0, nc0, t0), (nr1, nc1, t1), check = args
    m0 = SparseIntMatrix(nr0, nc0, *t0) if t0 is not None else SparseIntMatrix(nr0, nc0)
    m1 = SparseIntMatrix(nr1, nc1, *t1) if t1 is not None else SparseIntMatrix(nr1, nc1)
    ok = True
    if check:
        ok = (m1 @ m0).is_zero() and (m0 @ m1).is_zero()
    return smith_normal_form(m0), smith_normal_form(m1), ok


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("KBH_THREADS", "1")))
    except ValueError:
        return 1


def homology(x: TwoComplex, check: bool = True, workers: int | None = None) -> GradedHomology:
    """``H_i = ker D_i / im D_(1-i)`` computed independently in each q-degree."""
    if check and (not _degree_zero(x.D0, x.M1, x.M0) or not _degree_zero(x.D1, x.M0, x.M1)):
        raise NotAComplex("a differential does not preserve q-degree")
    deg0, deg1 = x.M0.degrees, x.M1.degrees
    b0 = _local_blocks(x.D0, deg1, deg0)
    b1 = _local_blocks(x.D1, deg0, deg1)
    all_deg = sorted(set(deg0.tolist()) | set(deg1.tolist()))
    n0 = {j: int(k) for j, k in zip(*np.unique(deg0, return_counts=True))}
    n1 = {j: int(k) for j, k in zip(*np.unique(deg1, return_counts=True))}
    jobs = []
    for j in all_deg:
        a, b = n0.get(j, 0), n1.get(j, 0)
        jobs.append(((b, a, b0.get(j)), (a, b, b1.get(j)), check))
    workers = default_workers() if workers is None else workers
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_block_factors, jobs))
    else:
        results = [_block_factors(job) for job in jobs]
    groups = {}
    for j, (f0, f1, ok) in zip(all_deg, results):
        if not ok:
            raise NotAComplex(f"composite of differentials is nonzero in degree {j}")
        a, b = n0.get(j, 0), n1.get(j, 0)
        groups[(0, j)] = QuotientStructure(a - f0.rank - f1.rank, f1.torsion)
        groups[(1, j)] = QuotientStructure(b - f1.rank - f0.rank, f0.torsion)
    return GradedHomology.from_dict(groups)


# -- chain maps -------------------------------------------------------------


@dataclass(frozen=True)
class ChainMap:
    """Degree-0 maps ``f0: X0 -> Y0`` and ``f1: X1 -> Y1``."""

    f0: SparseIntMatrix
    f1: SparseIntMatrix

    def compose(self, other: "ChainMap") -> "ChainMap":
        """``self`` after ``other``."""
        return ChainMap(self.f0 @ other.f0, self.f1 @ other.f1)

    def is_zero(self) -> bool:
        return self.f0.is_zero() and self.f1.is_zero()


def is_chain_map(f: ChainMap, source: TwoComplex, target: TwoComplex) -> bool:
    if f.f0.shape != (len(target.M0), len(source.M0)) or f.f1.shape != (len(target.M1), len(source.M1)):
        return False
    return (f.f1 @ source.D0 == target.D0 @ f.f0) and (f.f0 @ source.D1 == target.D1 @ f.f1)
