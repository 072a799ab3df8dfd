"""Monte Carlo estimates of diagonal-sum moments and their comparison
with the closed forms.  This is the only module that uses floats for
statistics; formula rationals are rounded to doubles at comparison time."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import stats as _st

from .core import BoxDims, CapExceeded
from .enumeration import diagonal_sum_array, enumerate_array
from .formulas import covariance_diagonal_sums, macmahon_count, mean_diagonal_sum
from .qpoly import frac_str
from .sample import cftp_arrays, derive_seeds, mcmc_arrays, parse_seed

__all__ = [
    "MomentEstimate",
    "Report",
    "ChiSquareResult",
    "draw_samples",
    "estimate_from_sums",
    "monte_carlo_moments",
    "compare_to_formula",
    "chi_square_uniformity",
]

DEFAULT_MCMC_SWEEPS = 100
CHI_SQUARE_ALPHA = 0.001
CHI_SQUARE_MAX_STATES = 10**4


@dataclass
class MomentEstimate:
    """Sample moments of the diagonal-sum vector over i = -a..b.

    ``cov`` uses the (n-1) normalisation.  ``cov_se`` is the plug-in
    standard error: the sample standard deviation of the centred products,
    divided by sqrt(n).
    """

    dims: BoxDims
    n_samples: int
    mean: np.ndarray
    mean_se: np.ndarray
    cov: np.ndarray
    cov_se: np.ndarray
    seed: int
    sampler: str
    sweeps: int | None = None

    def __post_init__(self):
        if self.n_samples < 2:
            raise ValueError("need at least 2 samples")


def draw_samples(dims: BoxDims, n: int, seed, sampler: str = "cftp",
                 sweeps: int = DEFAULT_MCMC_SWEEPS) -> np.ndarray:
    """``n`` independent samples as an (n, a, b) array; sample k uses the
    k-th derived seed."""
    seeds = derive_seeds(seed, n)
    if sampler == "cftp":
        return cftp_arrays(dims, seeds)
    if sampler == "mcmc":
        return mcmc_arrays(dims, seeds, sweeps)
    raise ValueError(f"unknown sampler {sampler!r}")


def estimate_from_sums(dims: BoxDims, sums: np.ndarray, seed: int = 0,
                       sampler: str = "cftp", sweeps: int | None = None) -> MomentEstimate:
    x = np.asarray(sums, dtype=np.float64)
    n = len(x)
    if n < 2:
        raise ValueError("need at least 2 samples")
    mean = x.mean(axis=0)
    d = x - mean
    cov = d.T @ d / (n - 1)
    cov = (cov + cov.T) / 2
    mean_se = x.std(axis=0, ddof=1) / math.sqrt(n)
    # per-sample centred products, one column pair at a time
    m = x.shape[1]
    cov_se = np.zeros((m, m))
    for i in range(m):
        w = d[:, i:i + 1] * d[:, i:]
        cov_se[i, i:] = w.std(axis=0, ddof=1) / math.sqrt(n)
    cov_se = np.triu(cov_se) + np.triu(cov_se, 1).T
    return MomentEstimate(dims, n, mean, mean_se, cov, cov_se, seed, sampler, sweeps)


def monte_carlo_moments(dims: BoxDims, n: int, seed, sampler: str = "cftp",
                        sweeps: int = DEFAULT_MCMC_SWEEPS) -> MomentEstimate:
    if n < 2:
        raise ValueError("need at least 2 samples")
    seed = parse_seed(seed)
    arr = draw_samples(dims, n, seed, sampler, sweeps)
    return estimate_from_sums(dims, diagonal_sum_array(arr, dims), seed, sampler,
                              sweeps if sampler == "mcmc" else None)


def _z(est: float, se: float, target: float) -> float:
    if se > 0:
        return (est - target) / se
    return 0.0 if est == target else math.copysign(math.inf, est - target)


@dataclass
class Report:
    estimate: MomentEstimate
    threshold: float
    means: list[dict] = field(default_factory=list)
    cov: list[dict] = field(default_factory=list)

    @property
    def flagged(self) -> list[dict]:
        return [e for e in self.means + self.cov if abs(e["z"]) > self.threshold]

    @property
    def passed(self) -> bool:
        return not self.flagged

    def to_dict(self) -> dict:
        d = self.estimate.dims
        return {
            "dims": {"a": d.a, "b": d.b, "c": d.c},
            "n": self.estimate.n_samples,
            "seed": self.estimate.seed,
            "sampler": self.estimate.sampler,
            "threshold": self.threshold,
            "cov_estimator": "unbiased (n-1); se = sd of centred products / sqrt(n)",
            "means": self.means,
            "cov": self.cov,
            "pass": self.passed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False, default=_jsonable)

    def max_abs_z(self) -> float:
        return max(abs(e["z"]) for e in self.means + self.cov)


def _jsonable(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    raise TypeError(type(x))


def _finite(z: float) -> float:
    # JSON has no infinity; a zero-SE mismatch is reported as a huge z
    return z if math.isfinite(z) else math.copysign(1e308, z)


def compare_to_formula(est: MomentEstimate, threshold: float = 4.0) -> Report:
    """z-score every mean and covariance entry against the closed forms."""
    dims = est.dims
    idx = list(dims.diagonals)
    rep = Report(est, threshold)
    for p, i in enumerate(idx):
        f = mean_diagonal_sum(dims, i)
        rep.means.append({
            "i": i,
            "est": float(est.mean[p]),
            "se": float(est.mean_se[p]),
            "formula": frac_str(f),
            "z": _finite(_z(float(est.mean[p]), float(est.mean_se[p]), float(f))),
        })
    for p, i in enumerate(idx):
        for q in range(p, len(idx)):
            j = idx[q]
            f = covariance_diagonal_sums(dims, i, j)
            rep.cov.append({
                "i": i,
                "j": j,
                "est": float(est.cov[p, q]),
                "se": float(est.cov_se[p, q]),
                "formula": frac_str(f),
                "z": _finite(_z(float(est.cov[p, q]), float(est.cov_se[p, q]), float(f))),
            })
    return rep


class ChiSquareResult(NamedTuple):
    statistic: float
    dof: int
    passed: bool
    critical: float


def chi_square_uniformity(dims: BoxDims, n: int, seed, sampler: str = "cftp",
                          sweeps: int = 50, alpha: float = CHI_SQUARE_ALPHA) -> ChiSquareResult:
    """Pearson chi-square of n samples against the uniform law on all
    partitions; passes iff the statistic is below the (1 - alpha) quantile."""
    count = macmahon_count(dims)
    if count > CHI_SQUARE_MAX_STATES:
        raise CapExceeded(f"{dims} has {count} states, limit {CHI_SQUARE_MAX_STATES}", count)
    states = enumerate_array(dims).reshape(count, -1)
    index = {row.tobytes(): k for k, row in enumerate(states)}
    arr = draw_samples(dims, n, seed, sampler, sweeps).reshape(n, -1)
    observed = np.bincount([index[row.tobytes()] for row in arr], minlength=count)
    expected = n / count
    stat = float(((observed - expected) ** 2).sum() / expected)
    dof = count - 1
    critical = float(_st.chi2.ppf(1 - alpha, dof)) if dof > 0 else math.inf
    return ChiSquareResult(stat, dof, stat < critical, critical)
