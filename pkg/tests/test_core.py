from itertools import product

import pytest
from hypothesis import given

from bppdiag.core import (
    BoxDims,
    IndexOutOfRange,
    MonotonicityViolation,
    OutOfRange,
    ShapeMismatch,
    bottom,
    centered_sums,
    complement,
    contour_heights,
    diagonal_length,
    diagonal_sums,
    find_violations,
    format_json,
    format_text,
    parse_json,
    parse_text,
    top,
    transpose,
    validate,
)
from bppdiag.enumeration import enumerate_bpps
from bppdiag.formulas import mean_diagonal_sum

from conftest import partitions

D222 = BoxDims(2, 2, 2)


def test_box_dims_rejects_bad_values():
    with pytest.raises(ValueError):
        BoxDims(0, 1, 1)
    with pytest.raises(ValueError):
        BoxDims(1, 1, -1)
    with pytest.raises(TypeError):
        BoxDims(1.5, 1, 1)
    assert BoxDims.parse("4,5,6") == BoxDims(4, 5, 6)
    assert BoxDims.parse("4 5 6") == BoxDims(4, 5, 6)


def test_validate_accepts_valid(p222):
    assert p222.z == ((2, 1), (1, 0))
    assert p222[1, 1] == 2 and p222[2, 2] == 0


def test_validate_row_increase():
    with pytest.raises(MonotonicityViolation) as err:
        validate([[1, 2], [0, 0]], D222)
    [v] = err.value.violations
    assert v.kind == "row" and v.cell == (1, 1)


def test_validate_out_of_range():
    with pytest.raises(OutOfRange) as err:
        validate([[3, 0], [0, 0]], D222)
    assert any(v.kind == "range" and v.cell == (1, 1) for v in err.value.violations)


def test_validate_shape():
    with pytest.raises(ShapeMismatch):
        validate([[1, 0]], D222)
    with pytest.raises(ShapeMismatch):
        validate([[1, 0], [0]], D222)


def test_validate_reports_every_violation():
    bad = find_violations([[0, 1, 2], [1, 2, 9]], BoxDims(2, 3, 3))
    kinds = sorted(v.kind for v in bad)
    assert kinds.count("row") == 4
    assert kinds.count("column") == 3
    assert kinds.count("range") == 1


def test_diagonal_sums_examples(p222):
    s = diagonal_sums(p222)
    assert (s[-1], s[0], s[1]) == (1, 2, 1)
    assert s[-2] == 0 and s[2] == 0
    assert all(v == 0 for _, v in diagonal_sums(bottom(BoxDims(3, 2, 5))).items())
    full = diagonal_sums(top(D222))
    assert (full[-1], full[0], full[1]) == (2, 4, 2)
    with pytest.raises(IndexOutOfRange):
        s[3]


def test_contour_heights_examples(p222):
    h = contour_heights(p222)
    # diagonal 0 holds 2 and 0, so only one of its cells reaches level 1
    assert h.level(1) == (0, 1, 1, 1, 0)
    assert h.level(2) == (0, 0, 1, 0, 0)
    assert all(v == 0 for level in contour_heights(bottom(BoxDims(2, 3, 2))).h for v in level)
    single = contour_heights(validate([[2]], BoxDims(1, 1, 3)))
    assert (single[1, 0], single[2, 0], single[3, 0]) == (1, 1, 0)


def test_transpose_examples(p222):
    assert transpose(p222) == p222
    p = validate([[1, 0]], BoxDims(1, 2, 1))
    t = transpose(p)
    assert t.dims == BoxDims(2, 1, 1) and t.z == ((1,), (0,))
    st = diagonal_sums(t)
    assert (st[-1], st[0], st[1]) == (0, 1, 0)


def test_complement_examples(p222):
    assert complement(bottom(D222)) == top(D222)
    assert complement(p222) == p222


def _enumerated(max_side=3):
    for a, b, c in product(range(1, max_side + 1), repeat=3):
        yield from enumerate_bpps(BoxDims(a, b, c))


def test_symmetry_laws_on_all_small_boxes():
    checked = 0
    for p in _enumerated():
        a, b, c = p.dims
        s = diagonal_sums(p)
        t = transpose(p)
        st = diagonal_sums(t)
        assert validate(t.z, t.dims) == t
        assert transpose(t) == p
        assert all(st[i] == s[-i] for i in t.dims.diagonals)
        q = complement(p)
        sq = diagonal_sums(q)
        assert validate(q.z, q.dims) == q
        assert complement(q) == p
        for i in p.dims.diagonals:
            assert sq[(b - a) - i] == c * diagonal_length(p.dims, i) - s[i]
        checked += 1
    assert checked > 1000


@given(partitions())
def test_sum_and_contour_invariants(p):
    s = diagonal_sums(p)
    assert s.total == p.total
    h = contour_heights(p)
    c = p.dims.c
    for i in p.dims.diagonals:
        assert sum(h[k, i] for k in range(1, c + 1)) == s[i]
        assert 0 <= s[i] <= c * diagonal_length(p.dims, i)
        for k in range(1, c):
            assert h[k, i] >= h[k + 1, i]
    assert s[-p.dims.a] == 0 and s[p.dims.b] == 0


@given(partitions())
def test_centered_sums(p):
    y = centered_sums(p)
    s = diagonal_sums(p)
    assert y[-p.dims.a] == 0 and y[p.dims.b] == 0
    for i in p.dims.diagonals:
        assert y[i] + s[i] == mean_diagonal_sum(p.dims, i)


@given(partitions())
def test_text_and_json_round_trip(p):
    text = format_text(p)
    assert parse_text(text) == p
    assert format_text(parse_text(text)) == text
    js = format_json(p)
    assert parse_json(js) == p
    assert format_json(parse_json(js)) == js


def test_text_format_layout(p222):
    assert format_text(p222) == "2 2 2\n2 1\n1 0\n"
    assert format_json(p222) == '{"a": 2, "b": 2, "c": 2, "z": [[2, 1], [1, 0]]}\n'
