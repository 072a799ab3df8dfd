import json
from fractions import Fraction

import jsonschema
import numpy as np
import pytest

from bppdiag import schema
from bppdiag.core import BoxDims
from bppdiag.formulas import covariance_matrix, mean_vector
from bppdiag.stats import (
    MomentEstimate,
    compare_to_formula,
    estimate_from_sums,
    monte_carlo_moments,
)


def test_single_cell_mean():
    est = monte_carlo_moments(BoxDims(1, 1, 9), 100_000, 3)
    assert abs(est.mean[1] - 4.5) < 5 * est.mean_se[1]


def test_456_mean_and_covariance():
    d = BoxDims(4, 5, 6)
    est = monte_carlo_moments(d, 10_000, 1)
    p0, p1 = 0 + d.a, 1 + d.a
    assert abs(est.mean[p0] - 40 / 3) < 4 * est.mean_se[p0]
    assert abs(est.cov[p0, p1] - 40 / 9) < 4 * est.cov_se[p0, p1]


def _exact_estimate(dims):
    m = len(list(dims.diagonals))
    mean = np.array([float(x) for x in mean_vector(dims)])
    cov = np.array([[float(x) for x in row] for row in covariance_matrix(dims)])
    return MomentEstimate(dims, 100, mean, np.zeros(m), cov, np.zeros((m, m)), 0, "cftp")


def test_injected_formula_values_pass():
    rep = compare_to_formula(_exact_estimate(BoxDims(3, 2, 4)))
    assert rep.passed
    assert all(e["z"] == 0 for e in rep.means + rep.cov)


def test_corrupted_estimate_is_flagged():
    d = BoxDims(2, 2, 2)
    est = monte_carlo_moments(d, 20_000, 5)
    assert compare_to_formula(est).passed
    est.mean[d.a] += 10 * est.mean_se[d.a]
    rep = compare_to_formula(est)
    assert not rep.passed
    assert [e["i"] for e in rep.flagged] == [0]


def test_222_passes():
    assert compare_to_formula(monte_carlo_moments(BoxDims(2, 2, 2), 100_000, 7)).passed


def test_mcmc_sampler_estimate():
    est = monte_carlo_moments(BoxDims(2, 3, 2), 5_000, 1, sampler="mcmc", sweeps=40)
    assert est.sampler == "mcmc" and est.sweeps == 40
    assert compare_to_formula(est).passed


def test_determinism():
    d = BoxDims(3, 3, 3)
    r1 = compare_to_formula(monte_carlo_moments(d, 2000, 42)).dumps()
    r2 = compare_to_formula(monte_carlo_moments(d, 2000, 42)).dumps()
    assert r1 == r2


def test_errors_shrink_with_more_samples():
    d = BoxDims(3, 3, 3)
    small = compare_to_formula(monte_carlo_moments(d, 300, 8))
    large = compare_to_formula(monte_carlo_moments(d, 30_000, 8))

    def errs(rep):
        return [abs(e["est"] - float(Fraction(e["formula"]))) for e in rep.means + rep.cov if e["se"] > 0]

    assert np.median(errs(large)) < np.median(errs(small))
    ratio = [s["se"] / l["se"] for s, l in zip(small.means, large.means) if l["se"] > 0]
    assert 7 < np.median(ratio) < 13


def test_estimator_conventions():
    sums = np.array([[0, 1, 0], [0, 3, 0]])
    est = estimate_from_sums(BoxDims(1, 1, 3), sums)
    assert est.mean[1] == 2
    assert est.cov[1, 1] == 2  # (n-1) normalisation
    with pytest.raises(ValueError):
        estimate_from_sums(BoxDims(1, 1, 3), sums[:1])


def test_report_json_schema():
    rep = compare_to_formula(monte_carlo_moments(BoxDims(2, 2, 2), 500, 1))
    doc = json.loads(rep.dumps())
    jsonschema.validate(doc, schema("mc_report"))
    assert {"dims", "n", "sampler", "means", "cov", "pass"} <= set(doc)
