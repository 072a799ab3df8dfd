"""Exact cross-check suite: every closed form against both ground-truth
engines on a grid of boxes."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from .core import BoxDims
from .enumeration import (
    DEFAULT_ENUM_CAP,
    DEFAULT_STATE_BUDGET,
    conditional_mean_check,
    enumerate_array,
    exact_moments_bruteforce,
    exact_moments_dp,
    sum_distribution,
)
from .formulas import (
    covariance_diagonal_sums,
    covariance_ratio_form,
    macmahon_count,
    mean_diagonal_sum,
    quadratic_sum_identity,
    total_sum_variance,
)
from .genfunc import moments_from_qpoly, q_macmahon

__all__ = ["CheckResult", "grid", "run_checks", "format_table"]

# harmonicity groups every partition by its neighbours; keep it small
HARMONIC_CAP = 10**5


@dataclass(frozen=True)
class CheckResult:
    name: str
    dims: str
    passed: bool
    detail: str = ""


def grid(amax: int, bmax: int, cmax: int) -> list[BoxDims]:
    return [
        BoxDims(a, b, c)
        for a in range(1, amax + 1)
        for b in range(1, bmax + 1)
        for c in range(1, cmax + 1)
    ]


def _mismatches(dims: BoxDims, moments) -> tuple[int, int]:
    bad_mean = sum(moments.mean_at(i) != mean_diagonal_sum(dims, i) for i in dims.diagonals)
    bad_cov = sum(
        moments.cov_at(i, j) != covariance_diagonal_sums(dims, i, j)
        for i in dims.diagonals
        for j in dims.diagonals
    )
    return bad_mean, bad_cov


def check_dims(dims: BoxDims, enum_cap: int = DEFAULT_ENUM_CAP,
               state_budget: int = DEFAULT_STATE_BUDGET) -> Iterator[CheckResult]:
    tag = f"{dims.a},{dims.b},{dims.c}"
    expected = macmahon_count(dims)
    brute = None
    if expected <= enum_cap:
        n = len(enumerate_array(dims, enum_cap))
        yield CheckResult("count", tag, n == expected, f"{n} vs {expected}")
        brute = exact_moments_bruteforce(dims, enum_cap)
        bm, bc = _mismatches(dims, brute)
        yield CheckResult("mean/brute", tag, bm == 0, f"{bm} mismatches")
        yield CheckResult("cov/brute", tag, bc == 0, f"{bc} mismatches")
    dp = exact_moments_dp(dims, state_budget)
    yield CheckResult("count/dp", tag, dp.count == expected, f"{dp.count} vs {expected}")
    dm, dc = _mismatches(dims, dp)
    yield CheckResult("mean/dp", tag, dm == 0, f"{dm} mismatches")
    yield CheckResult("cov/dp", tag, dc == 0, f"{dc} mismatches")
    if brute is not None:
        yield CheckResult("brute==dp", tag, brute == dp)
    if expected <= HARMONIC_CAP:
        worst = max(conditional_mean_check(dims, i, enum_cap) for i in dims.interior)
        yield CheckResult("harmonicity", tag, worst == 0, f"max discrepancy {worst}")
    qp = q_macmahon(dims)
    yield CheckResult("qpoly==dp", tag, qp == sum_distribution(dims, state_budget))
    var = moments_from_qpoly(qp)[2]
    yield CheckResult("total-variance", tag, var == total_sum_variance(dims), f"{var}")
    ratio_bad = sum(
        covariance_ratio_form(dims, i, j) != covariance_diagonal_sums(dims, i, j)
        for i in dims.diagonals
        for j in dims.diagonals
        if i <= j
    )
    yield CheckResult("ratio-form", tag, ratio_bad == 0, f"{ratio_bad} mismatches")


def run_checks(amax: int, bmax: int, cmax: int, enum_cap: int = DEFAULT_ENUM_CAP,
               state_budget: int = DEFAULT_STATE_BUDGET,
               progress: Callable[[CheckResult], None] | None = None) -> list[CheckResult]:
    results = []
    for a in range(1, amax + 1):
        for b in range(1, bmax + 1):
            lhs, rhs = quadratic_sum_identity(a, b)
            results.append(CheckResult("quadratic-identity", f"{a},{b}", lhs == rhs, f"{lhs} vs {rhs}"))
    for dims in grid(amax, bmax, cmax):
        for res in check_dims(dims, enum_cap, state_budget):
            results.append(res)
            if progress:
                progress(res)
    return results


def format_table(results: list[CheckResult]) -> str:
    w = max(len(r.name) for r in results)
    lines = [f"{'check':<{w}}  {'dims':<8}  status  detail"]
    for r in results:
        lines.append(f"{r.name:<{w}}  {r.dims:<8}  {'PASS' if r.passed else 'FAIL':<6}  {r.detail}")
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed} passed, {failed} failed")
    return "\n".join(lines)
