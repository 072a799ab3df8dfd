"""Closed-form moments of diagonal sums, evaluated in exact rationals.

All functions return :class:`fractions.Fraction` (or ``int`` for counts).
Floats never appear here.
"""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from math import prod

from .core import BoxDims, BppError, IndexOutOfRange

__all__ = [
    "mean_diagonal_sum",
    "covariance_diagonal_sums",
    "total_sum_variance",
    "total_sum_mean",
    "macmahon_count",
    "quadratic_sum_identity",
    "covariance_ratio_form",
    "mean_vector",
    "covariance_matrix",
    "harmonic_defect",
]


class InternalError(BppError):
    """An exact computation produced an impossible value."""


def mean_diagonal_sum(dims: BoxDims, i: int) -> Fraction:
    """E[S_i] for a uniformly random partition in the ``dims`` box.

    Linear on each side of the main diagonal, with a kink at ``i = 0``;
    vanishes at ``i = -a`` and ``i = b``.
    """
    a, b, c = dims
    dims.check_index(i)
    if i <= 0:
        return Fraction((a + i) * b * c, a + b)
    return Fraction((b - i) * a * c, a + b)


def covariance_diagonal_sums(dims: BoxDims, i: int, j: int) -> Fraction:
    """Cov(S_i, S_j): the product of the distances from the lower index to
    the left end and from the upper index to the right end, times a
    constant depending only on the box."""
    a, b, c = dims
    dims.check_index(i)
    dims.check_index(j)
    if i > j:
        i, j = j, i
    n = a + b
    return Fraction((a + i) * (b - j) * a * b * c * (a + b + c), n * n * (n * n - 1))


def total_sum_mean(dims: BoxDims) -> Fraction:
    a, b, c = dims
    return Fraction(a * b * c, 2)


def total_sum_variance(dims: BoxDims) -> Fraction:
    """Var[S] where S is the sum of all entries."""
    a, b, c = dims
    return Fraction(a * b * c * (a + b + c), 12)


def macmahon_count(dims: BoxDims) -> int:
    """Number of partitions in the box, as an exact integer.

    The triple product of (i+j+k-1)/(i+j+k-2) is evaluated by counting how
    often each integer appears upstairs and downstairs, cancelling, and
    multiplying what is left.
    """
    a, b, c = dims
    num: Counter[int] = Counter()
    den: Counter[int] = Counter()
    for i in range(1, a + 1):
        for j in range(1, b + 1):
            for k in range(1, c + 1):
                num[i + j + k - 1] += 1
                den[i + j + k - 2] += 1
    value = Fraction(
        prod(n**e for n, e in (num - den).items()),
        prod(n**e for n, e in (den - num).items()),
    )
    if value.denominator != 1:
        raise InternalError(f"MacMahon product for {dims} is not an integer: {value}")
    return value.numerator


def quadratic_sum_identity(a: int, b: int) -> tuple[int, Fraction]:
    """Both sides of the double-sum identity used to pin Var[S_{-a+1}].

    lhs is the literal sum ``2*sum_{i<j} (a+i)(b-j) + sum_i (a+i)(b-i)`` over
    interior indices; rhs is ``(a+b)^2((a+b)^2-1)/12``.
    """
    if a < 1 or b < 1:
        raise ValueError("a and b must be >= 1")
    idx = range(-a + 1, b)
    off = sum((a + i) * (b - j) for i in idx for j in idx if i < j)
    diag = sum((a + i) * (b - i) for i in idx)
    n = a + b
    return 2 * off + diag, Fraction(n * n * (n * n - 1), 12)


def covariance_ratio_form(dims: BoxDims, i: int, j: int) -> Fraction:
    """Cov(S_i, S_j) expressed through the corner variance Var[S_{-a+1}]."""
    a, b, _ = dims
    dims.check_index(i)
    dims.check_index(j)
    if i > j:
        raise IndexOutOfRange(f"expected i <= j, got i={i}, j={j}")
    corner = covariance_diagonal_sums(dims, -a + 1, -a + 1)
    return Fraction((a + i) * (b - j), a + b - 1) * corner


def mean_vector(dims: BoxDims) -> list[Fraction]:
    """E[S_i] for i = -a..b."""
    return [mean_diagonal_sum(dims, i) for i in dims.diagonals]


def covariance_matrix(dims: BoxDims) -> list[list[Fraction]]:
    """Cov(S_i, S_j) over i, j = -a..b (boundary rows and columns are 0)."""
    d = list(dims.diagonals)
    return [[covariance_diagonal_sums(dims, i, j) for j in d] for i in d]


def harmonic_defect(dims: BoxDims, i: int) -> Fraction:
    """mean(i) - (mean(i-1) + mean(i+1)) / 2 for interior ``i``.

    Nonzero only at the kink ``i = 0``.
    """
    if not -dims.a < i < dims.b:
        raise IndexOutOfRange(f"{i} is not an interior diagonal of {dims}")
    return mean_diagonal_sum(dims, i) - (
        mean_diagonal_sum(dims, i - 1) + mean_diagonal_sum(dims, i + 1)
    ) / 2
