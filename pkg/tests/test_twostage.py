"""Tests for the adaptive and thresholded two-stage estimators."""

import math

import numpy as np
import numpy.testing as npt
import pytest

from sparse2stage import eigen
from sparse2stage.errors import EmptyOracleSet, ZeroCoefficient
from sparse2stage.linalg import normalize_columns
from sparse2stage.solver import WeightedLassoProblem, solve
from sparse2stage.twostage import (adaptive_lasso, adaptive_weights,
                                   harmonic_mean, lambda_init_from_noise,
                                   threshold_refit, tuning_conditions)


@pytest.fixture(scope="module")
def fitted():
    rng = np.random.default_rng(30)
    design = normalize_columns(rng.standard_normal((60, 12)))
    beta = np.zeros(12)
    beta[[0, 1, 2]] = [3.0, -2.5, 2.0]
    y = design.predict(beta) + 0.3 * rng.standard_normal(60)
    init = solve(WeightedLassoProblem(design, y, 0.4))
    return design, y, init


def test_lambda_init_formula():
    val = lambda_init_from_noise(2.0, 3.0, 100, 50)
    expected = 8.0 * math.sqrt((6.0 + 2.0 * math.log(50)) / 100.0)
    assert val == pytest.approx(expected, rel=1e-12)
    with pytest.raises(ValueError):
        lambda_init_from_noise(0.0, 3.0, 100, 50)


def test_adaptive_weights_invert_magnitudes(fitted):
    _, _, init = fitted
    w = adaptive_weights(init)
    for j in range(len(w)):
        if init.beta[j] == 0:
            assert w[j] == np.inf
        else:
            assert w[j] == pytest.approx(1.0 / abs(init.beta[j]))


def test_adaptive_active_subset_of_initial(fitted):
    design, y, init = fitted
    res = adaptive_lasso(design, y, 0.4, 1.0, initial=init)
    assert set(res.final_active) <= set(init.active_set)
    assert res.method == "adaptive"


def test_threshold_monotone_nesting(fitted):
    design, y, init = fitted
    deltas = np.linspace(0.0, 2.0, 20)
    prev = None
    for delta in deltas:
        res = threshold_refit(design, y, init, delta)
        cur = set(res.final_active)
        if prev is not None:
            assert cur <= prev
        prev = cur


def test_threshold_is_strict(fitted):
    design, y, init = fitted
    j = init.active_set[0]
    delta = abs(init.beta[j])
    res = threshold_refit(design, y, init, delta)
    assert j not in res.final_active


def test_threshold_refit_is_least_squares(fitted):
    design, y, init = fitted
    res = threshold_refit(design, y, init, 0.5)
    S = list(res.final_active)
    coef, *_ = np.linalg.lstsq(design.X[:, S], y, rcond=None)
    npt.assert_allclose(res.final_beta[S], coef, atol=1e-10)


def test_harmonic_mean():
    b = np.array([1.0, 2.0, 2.0])
    expected = 1.0 / math.sqrt((1.0 + 0.25 + 0.25) / 3.0)
    assert harmonic_mean(b) == pytest.approx(expected, rel=1e-12)
    assert harmonic_mean([5.0]) == pytest.approx(5.0)
    with pytest.raises(EmptyOracleSet):
        harmonic_mean([])
    with pytest.raises(ZeroCoefficient):
        harmonic_mean([1.0, 0.0])


def test_tuning_conditions_identity_design():
    report = eigen.build_eigen_report(np.eye(10), [0, 1])
    lam = 0.5
    tun = tuning_conditions(report, lam, b0_on_S0=np.array([2.0, 4.0]))
    # identity: every eigen quantity is 1
    assert tun.lambda_thres_AA == pytest.approx(lam, abs=1e-6)
    assert tun.lambda_adap_BB == pytest.approx(lam, abs=1e-6)
    assert tun.lambda_adap_CC == pytest.approx(harmonic_mean([2.0, 4.0]))
    assert tun.b_min == pytest.approx(2.0)


def test_tuning_scales_with_constants():
    report = eigen.build_eigen_report(np.eye(10), [0, 1])
    t1 = tuning_conditions(report, 0.5, c_AA=1.0, c_BB=1.0)
    t2 = tuning_conditions(report, 0.5, c_AA=2.0, c_BB=0.5)
    assert t2.lambda_thres_AA == pytest.approx(2.0 * t1.lambda_thres_AA)
    assert t2.lambda_adap_BB == pytest.approx(0.5 * t1.lambda_adap_BB)
