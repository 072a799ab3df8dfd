"""Generating functions: the q-MacMahon product and the multivariate
diagonal generating function for unbounded entries."""
from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import BoxDims, BudgetExceeded, CapExceeded
from .enumeration import DEFAULT_ENUM_CAP, diagonal_sum_array, enumerate_array
from .qpoly import DomainError, QPolynomial

__all__ = [
    "DEFAULT_DEGREE_CAP",
    "DEFAULT_STANLEY_BUDGET",
    "MultiMonomialTable",
    "q_integer",
    "q_macmahon",
    "moments_from_qpoly",
    "stanley_coefficients",
    "stanley_check",
]

DEFAULT_DEGREE_CAP = 20_000
DEFAULT_STANLEY_BUDGET = 10**6


def q_integer(n: int) -> QPolynomial:
    return QPolynomial.q_integer(n)


def _macmahon_factors(dims: BoxDims) -> tuple[Counter, Counter]:
    """Multisets of q-integer sizes in the numerator and denominator."""
    a, b, c = dims
    num: Counter[int] = Counter()
    den: Counter[int] = Counter()
    for i in range(1, a + 1):
        for j in range(1, b + 1):
            for k in range(1, c + 1):
                num[i + j + k - 1] += 1
                den[i + j + k - 2] += 1
    return num, den


def q_macmahon(dims: BoxDims, degree_cap: int = DEFAULT_DEGREE_CAP) -> QPolynomial:
    """Generating function of the total sum over all partitions in the box.

    Identical q-integers upstairs and downstairs cancel first (the product
    over k telescopes); the surviving numerator factors are multiplied out,
    then each surviving denominator factor is divided out exactly, largest
    first.  A nonzero remainder raises :class:`NonzeroRemainder`.
    """
    a, b, c = dims
    if a * b * c > degree_cap:
        raise CapExceeded(f"degree {a * b * c} exceeds cap {degree_cap}", a * b * c)
    num, den = _macmahon_factors(dims)
    num, den = num - den, den - num
    poly = QPolynomial([1])
    for n in sorted(num.elements()):
        poly = poly.times_q_integer(n)
    for n in sorted(den.elements(), reverse=True):
        if n > 1:
            poly = poly.exact_div(q_integer(n))
    if poly.degree != a * b * c:
        raise AssertionError(f"q-MacMahon for {dims} has degree {poly.degree}")
    return poly


def moments_from_qpoly(poly: QPolynomial) -> tuple[int, Fraction, Fraction]:
    """(count, mean, variance) of the exponent, reading coefficients as a
    histogram."""
    cs = poly.coeffs
    if not cs:
        raise DomainError("zero polynomial has no moments")
    if any(x < 0 for x in cs):
        raise DomainError("negative coefficient")
    count = sum(cs)
    s1 = sum(k * x for k, x in enumerate(cs))
    s2 = sum(k * k * x for k, x in enumerate(cs))
    mean = Fraction(s1, count)
    return count, mean, Fraction(s2, count) - mean * mean


@dataclass(frozen=True)
class MultiMonomialTable:
    """Coefficients of monomials prod_i x_i^e_i, keyed by the exponent
    tuple over diagonals -a+1..b-1."""

    a: int
    b: int
    max_degree: int
    coeffs: dict[tuple[int, ...], int]

    def __getitem__(self, exponents) -> int:
        return self.coeffs.get(tuple(exponents), 0)

    def __len__(self):
        return len(self.coeffs)

    def to_json(self) -> list[dict]:
        return [
            {"exponents": list(e), "count": str(self.coeffs[e])}
            for e in sorted(self.coeffs)
        ]

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def stanley_coefficients(a: int, b: int, max_degree: int,
                         budget: int = DEFAULT_STANLEY_BUDGET) -> MultiMonomialTable:
    """Truncated expansion of prod 1/(1 - x_i x_{i+1} ... x_j) over
    -a+1 <= i <= 0 <= j <= b-1, keeping total degree <= max_degree."""
    if a < 1 or b < 1 or max_degree < 0:
        raise ValueError("need a, b >= 1 and max_degree >= 0")
    width = a + b - 1
    if a * b * max_degree > budget:
        raise BudgetExceeded(f"a*b*max_degree = {a * b * max_degree} exceeds {budget}")
    table: dict[tuple[int, ...], int] = {(0,) * width: 1}
    for i in range(-a + 1, 1):
        for j in range(0, b):
            lo, hi = i + a - 1, j + a - 1
            step = hi - lo + 1
            # out[e] = table[e] + out[e - v]; visiting keys by increasing
            # degree means out[e - v] is final before it is used
            out = dict(table)
            by_degree: dict[int, list] = defaultdict(list)
            for key in table:
                by_degree[sum(key)].append(key)
            for d in range(max_degree - step + 1):
                for key in by_degree.get(d, ()):
                    nxt = tuple(e + 1 if lo <= p <= hi else e for p, e in enumerate(key))
                    if nxt not in out:
                        out[nxt] = 0
                        by_degree[d + step].append(nxt)
                    out[nxt] += out[key]
            table = out
    return MultiMonomialTable(a, b, max_degree, table)


def stanley_check(a: int, b: int, max_degree: int, cap: int = DEFAULT_ENUM_CAP) -> bool:
    """Compare the truncated expansion with a direct count of a x b
    partitions grouped by their diagonal-sum vector."""
    table = stanley_coefficients(a, b, max_degree)
    dims = BoxDims(a, b, max_degree)
    sums = diagonal_sum_array(enumerate_array(dims, cap), dims)[:, 1:-1]
    sums = sums[sums.sum(axis=1) <= max_degree]
    keys, counts = np.unique(sums, axis=0, return_counts=True)
    observed = {tuple(int(v) for v in k): int(n) for k, n in zip(keys, counts)}
    return observed == table.coeffs
