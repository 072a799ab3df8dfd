"""Ground truth: exhaustive enumeration and a diagonal transfer-matrix DP.

Both engines produce :class:`ExactMoments` (count, mean vector, covariance
matrix of the diagonal sums) as exact rationals.  They share no code past
the core types, so agreement between them is a real check.

The DP walks the diagonals from ``-a`` to ``b``.  Given the contents of one
diagonal, each cell of the next diagonal is constrained only by its left
neighbour (from above) and its lower neighbour (from below), both on the
previous diagonal, so the set of compatible successors is a box of
integer intervals.  Successors are generated from those intervals per
state; no dense transfer matrix is ever built.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import comb
from typing import Iterator

import numpy as np

from .core import (
    BoxDims,
    BudgetExceeded,
    CapExceeded,
    IndexOutOfRange,
    PlanePartition,
    diag_matrix,
    diagonal_cells,
    diagonal_length,
    partitions_from_array,
)
from .formulas import harmonic_defect, macmahon_count
from .qpoly import QPolynomial, frac_str

__all__ = [
    "DEFAULT_ENUM_CAP",
    "DEFAULT_STATE_BUDGET",
    "ExactMoments",
    "DiagonalChain",
    "enumerate_array",
    "enumerate_bpps",
    "exact_moments_bruteforce",
    "exact_moments_dp",
    "sum_distribution",
    "conditional_mean_check",
    "conditional_factorization_check",
]

DEFAULT_ENUM_CAP = 10**7
DEFAULT_STATE_BUDGET = 10**6

# rows per block when accumulating moments; keeps int64 products exact
_CHUNK = 1 << 16


@dataclass(frozen=True)
class ExactMoments:
    dims: BoxDims
    count: int
    mean: tuple[Fraction, ...]
    cov: tuple[tuple[Fraction, ...], ...]

    def mean_at(self, i: int) -> Fraction:
        self.dims.check_index(i)
        return self.mean[i + self.dims.a]

    def cov_at(self, i: int, j: int) -> Fraction:
        self.dims.check_index(i)
        self.dims.check_index(j)
        return self.cov[i + self.dims.a][j + self.dims.a]

    def to_dict(self) -> dict:
        idx = list(self.dims.diagonals)
        return {
            "dims": {"a": self.dims.a, "b": self.dims.b, "c": self.dims.c},
            "count": str(self.count),
            "mean": {str(i): frac_str(m) for i, m in zip(idx, self.mean)},
            "cov": {
                str(i): {str(j): frac_str(v) for j, v in zip(idx, row)}
                for i, row in zip(idx, self.cov)
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExactMoments":
        dims = BoxDims(**d["dims"])
        idx = [str(i) for i in dims.diagonals]
        return cls(
            dims,
            int(d["count"]),
            tuple(Fraction(d["mean"][i]) for i in idx),
            tuple(tuple(Fraction(d["cov"][i][j]) for j in idx) for i in idx),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _moments_from_sums(dims: BoxDims, count: int, first: list[int], second) -> ExactMoments:
    """Turn integer totals sum(S_i) and sum(S_i S_j) into exact moments."""
    n = len(first)
    mean = tuple(Fraction(x, count) for x in first)
    cov = tuple(
        tuple(Fraction(second[i][j] * count - first[i] * first[j], count * count) for j in range(n))
        for i in range(n)
    )
    return ExactMoments(dims, count, mean, cov)


# -- brute force ---------------------------------------------------------------

def _decreasing_rows(b: int, c: int) -> np.ndarray:
    """All weakly decreasing length-b rows over [0, c], lexicographically."""
    rows = [tuple(reversed(t)) for t in combinations_with_replacement(range(c + 1), b)]
    rows.sort()
    return np.array(rows, dtype=np.int64).reshape(len(rows), b)


def enumerate_array(dims: BoxDims, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
    """All partitions as an ``(N, a, b)`` int array, lexicographic in the
    flattened matrix.  Raises :class:`CapExceeded` when N would exceed cap."""
    a, b, c = dims
    predicted = macmahon_count(dims)
    if predicted > cap:
        raise CapExceeded(f"{dims} has {predicted} partitions, cap is {cap}", predicted)
    rows = _decreasing_rows(b, c)
    # dom[k]: indices of rows dominated componentwise by row k, ascending
    dominated = (rows[None, :, :] <= rows[:, None, :]).all(axis=2)
    ndom = dominated.sum(axis=1)
    domflat = np.nonzero(dominated)[1]
    domstart = np.concatenate(([0], np.cumsum(ndom)[:-1]))

    idx = np.arange(len(rows))[:, None]
    for _ in range(a - 1):
        last = idx[:, -1]
        counts = ndom[last]
        parent = np.repeat(np.arange(len(idx)), counts)
        first = np.concatenate(([0], np.cumsum(counts)[:-1]))
        offset = np.arange(counts.sum()) - np.repeat(first, counts)
        child = domflat[np.repeat(domstart[last], counts) + offset]
        idx = np.column_stack((idx[parent], child))
    out = rows[idx]
    if len(out) != predicted:
        raise AssertionError(f"enumerated {len(out)} partitions of {dims}, expected {predicted}")
    return out


def enumerate_bpps(dims: BoxDims, cap: int = DEFAULT_ENUM_CAP) -> Iterator[PlanePartition]:
    """Every partition in the box exactly once, in lexicographic order."""
    return partitions_from_array(enumerate_array(dims, cap), dims)


def diagonal_sum_array(arr: np.ndarray, dims: BoxDims) -> np.ndarray:
    """(N, a+b+1) array of diagonal sums for an (N, a, b) stack."""
    return arr.reshape(len(arr), -1) @ diag_matrix(dims)


def exact_moments_bruteforce(dims: BoxDims, cap: int = DEFAULT_ENUM_CAP) -> ExactMoments:
    arr = enumerate_array(dims, cap)
    s = diagonal_sum_array(arr, dims)
    n = s.shape[1]
    first = [0] * n
    second = [[0] * n for _ in range(n)]
    for start in range(0, len(s), _CHUNK):
        block = s[start:start + _CHUNK]
        f = block.sum(axis=0)
        g = block.T @ block
        for i in range(n):
            first[i] += int(f[i])
            for j in range(n):
                second[i][j] += int(g[i, j])
    return _moments_from_sums(dims, len(s), first, second)


# -- transfer-matrix DP --------------------------------------------------------

class DiagonalChain:
    """Diagonal states and the successor relation between neighbours.

    ``states[p]`` lists the weakly decreasing tuples allowed on diagonal
    ``p - a``; ``edges[p]`` is a pair of int arrays ``(src, dst)`` linking
    states of diagonal ``p - a`` to states of diagonal ``p - a + 1``.
    """

    def __init__(self, dims: BoxDims, budget: int = DEFAULT_STATE_BUDGET):
        a, b, c = dims
        total = sum(comb(diagonal_length(dims, i) + c, c) for i in dims.diagonals)
        if total > budget:
            raise BudgetExceeded(f"{dims} needs {total} diagonal states, budget is {budget}")
        self.dims = dims
        self.states: list[list[tuple[int, ...]]] = []
        for i in dims.diagonals:
            n = diagonal_length(dims, i)
            st = [tuple(reversed(t)) for t in combinations_with_replacement(range(c + 1), n)]
            st.sort()
            self.states.append(st)
        self.sums = [np.array([sum(x) for x in st], dtype=object) for st in self.states]
        self.edges = [self._edges(i) for i in list(dims.diagonals)[:-1]]

    def _edges(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        dims = self.dims
        c = dims.c
        here = {cell: m for m, cell in enumerate(diagonal_cells(dims, i))}
        # for each cell of diagonal i+1: positions of its left and lower
        # neighbours on diagonal i (None when outside the box)
        nbrs = [(here.get((r, j - 1)), here.get((r + 1, j))) for r, j in diagonal_cells(dims, i + 1)]
        p = i + dims.a
        index = {x: k for k, x in enumerate(self.states[p + 1])}
        src, dst = [], []
        for k, x in enumerate(self.states[p]):
            ranges = [
                range(x[lo] if lo is not None else 0, (x[up] if up is not None else c) + 1)
                for up, lo in nbrs
            ]
            for y in product(*ranges):
                src.append(k)
                dst.append(index[y])
        return np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64)

    @property
    def n_edges(self) -> int:
        return sum(len(s) for s, _ in self.edges)

    def push(self, p: int, values: np.ndarray) -> np.ndarray:
        """Values on diagonal p summed onto diagonal p+1 along edges."""
        src, dst = self.edges[p]
        out = np.zeros((len(self.states[p + 1]),) + values.shape[1:], dtype=object)
        np.add.at(out, dst, values[src])
        return out

    def pull(self, p: int, values: np.ndarray) -> np.ndarray:
        """Values on diagonal p+1 summed back onto diagonal p."""
        src, dst = self.edges[p]
        out = np.zeros((len(self.states[p]),) + values.shape[1:], dtype=object)
        np.add.at(out, src, values[dst])
        return out

    def forward_counts(self) -> list[np.ndarray]:
        f = [np.array([1], dtype=object)]
        for p in range(len(self.edges)):
            f.append(self.push(p, f[-1]))
        return f

    def backward_counts(self) -> list[np.ndarray]:
        g = [np.array([1], dtype=object)]
        for p in reversed(range(len(self.edges))):
            g.append(self.pull(p, g[-1]))
        return g[::-1]


def exact_moments_dp(dims: BoxDims, budget: int = DEFAULT_STATE_BUDGET) -> ExactMoments:
    chain = DiagonalChain(dims, budget)
    fwd = chain.forward_counts()
    bwd = chain.backward_counts()
    count = int(fwd[-1][0])
    n = len(chain.states)
    first = [int((fwd[p] * bwd[p] * chain.sums[p]).sum()) for p in range(n)]
    second = [[0] * n for _ in range(n)]
    for p in range(n):
        # partial sums weighted by S_p, carried forward to each later diagonal
        carried = fwd[p] * chain.sums[p]
        for q in range(p, n):
            if q > p:
                carried = chain.push(q - 1, carried)
            second[p][q] = second[q][p] = int((carried * chain.sums[q] * bwd[q]).sum())
    return _moments_from_sums(dims, count, first, second)


def sum_distribution(dims: BoxDims, budget: int = DEFAULT_STATE_BUDGET) -> QPolynomial:
    """Histogram of the total sum as a polynomial in q, built by the DP."""
    chain = DiagonalChain(dims, budget)
    width = dims.a * dims.b * dims.c + 1
    cur = np.zeros((1, width), dtype=object)
    cur[0, 0] = 1
    for p in range(len(chain.edges)):
        acc = chain.push(p, cur)
        cur = np.zeros_like(acc)
        for k, s in enumerate(chain.sums[p + 1]):
            cur[k, s:] = acc[k, :width - s]
    return QPolynomial(cur[0].tolist())


# -- harmonicity --------------------------------------------------------------

def _neighbour_groups(dims: BoxDims, i: int, cap: int):
    if not -dims.a < i < dims.b:
        raise IndexOutOfRange(f"{i} is not an interior diagonal of {dims}")
    arr = enumerate_array(dims, cap)
    cells = {k: diagonal_cells(dims, k) for k in (i - 1, i, i + 1)}
    groups: dict[tuple, list[tuple[int, ...]]] = defaultdict(list)
    for m in arr:
        left = tuple(int(m[r - 1, j - 1]) for r, j in cells[i - 1])
        right = tuple(int(m[r - 1, j - 1]) for r, j in cells[i + 1])
        mid = tuple(int(m[r - 1, j - 1]) for r, j in cells[i])
        groups[left, right].append(mid)
    return groups


def conditional_mean_check(dims: BoxDims, i: int, cap: int = DEFAULT_ENUM_CAP) -> Fraction:
    """Largest deviation, over all contents of diagonals i-1 and i+1, of
    E[S_i | neighbours] from the neighbour average plus the mean's kink
    term.  Zero means the centred sums are exactly harmonic at ``i``."""
    kink = harmonic_defect(dims, i)
    worst = Fraction(0)
    for (left, right), mids in _neighbour_groups(dims, i, cap).items():
        cond = Fraction(sum(map(sum, mids)), len(mids))
        target = Fraction(sum(left) + sum(right), 2) + kink
        worst = max(worst, abs(cond - target))
    return worst


def conditional_factorization_check(dims: BoxDims, i: int, cap: int = DEFAULT_ENUM_CAP) -> bool:
    """True iff, given diagonals i-1 and i+1, diagonal i is uniform over the
    product of per-cell intervals set by its four neighbours."""
    a, b, c = dims
    cells = diagonal_cells(dims, i)
    left_pos = {cell: k for k, cell in enumerate(diagonal_cells(dims, i - 1))}
    right_pos = {cell: k for k, cell in enumerate(diagonal_cells(dims, i + 1))}
    for (left, right), mids in _neighbour_groups(dims, i, cap).items():
        ranges = []
        for r, j in cells:
            below = [right[right_pos[r, j + 1]]] if (r, j + 1) in right_pos else []
            below += [left[left_pos[r + 1, j]]] if (r + 1, j) in left_pos else []
            above = [right[right_pos[r - 1, j]]] if (r - 1, j) in right_pos else []
            above += [left[left_pos[r, j - 1]]] if (r, j - 1) in left_pos else []
            ranges.append(range(max(below, default=0), min(above, default=c) + 1))
        expected = set(product(*ranges))
        seen = defaultdict(int)
        for mid in mids:
            seen[mid] += 1
        if set(seen) != expected or len(set(seen.values())) != 1:
            return False
    return True
