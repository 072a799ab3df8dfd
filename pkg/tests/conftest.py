from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import strategies as st

from bppdiag.core import BoxDims, PlanePartition


def naive_partitions(dims):
    """Every (c+1)^(ab) matrix, kept if weakly decreasing; lexicographic."""
    a, b, c = dims
    out = []
    for flat in product(range(c + 1), repeat=a * b):
        z = [flat[r * b:(r + 1) * b] for r in range(a)]
        if all(z[r][j] >= z[r][j + 1] for r in range(a) for j in range(b - 1)) and all(
            z[r][j] >= z[r + 1][j] for r in range(a - 1) for j in range(b)
        ):
            out.append(tuple(tuple(row) for row in z))
    return out


def naive_moments(dims):
    """Mean vector and covariance matrix of S_i over i=-a..b, by definition."""
    a, b, _ = dims
    parts = naive_partitions(dims)
    n = len(parts)
    sums = []
    for z in parts:
        s = [0] * (a + b + 1)
        for r in range(a):
            for j in range(b):
                s[j - r + a] += z[r][j]
        sums.append(s)
    m = len(sums[0])
    mean = [Fraction(sum(s[i] for s in sums), n) for i in range(m)]
    cov = [
        [Fraction(sum(s[i] * s[j] for s in sums), n) - mean[i] * mean[j] for j in range(m)]
        for i in range(m)
    ]
    return n, mean, cov


@st.composite
def partitions(draw, max_a=4, max_b=4, max_c=5):
    a = draw(st.integers(1, max_a))
    b = draw(st.integers(1, max_b))
    c = draw(st.integers(0, max_c))
    raw = draw(st.lists(st.integers(0, c), min_size=a * b, max_size=a * b))
    z = np.array(raw, dtype=np.int64).reshape(a, b)
    # running minima along rows then columns give a valid partition
    z = np.minimum.accumulate(np.minimum.accumulate(z, axis=1), axis=0)
    return PlanePartition(BoxDims(a, b, c), tuple(tuple(int(v) for v in row) for row in z))


@pytest.fixture
def p222():
    from bppdiag.core import validate

    return validate([[2, 1], [1, 0]], BoxDims(2, 2, 2))
