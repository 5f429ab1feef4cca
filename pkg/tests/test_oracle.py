"""Tests for the oracle-set search and its derived scalars."""

import itertools
import math

import numpy as np
import pytest

from sparse2stage import eigen, oracle
from sparse2stage.errors import BudgetExceeded
from sparse2stage.linalg import normalize_columns, project

THOROUGH = eigen.ConeSearchConfig(restarts=48, max_descent_steps=300)


@pytest.fixture(scope="module")
def instance():
    rng = np.random.default_rng(40)
    design = normalize_columns(rng.standard_normal((40, 8)))
    beta = np.zeros(8)
    beta[[0, 1, 2, 3]] = [3.0, 2.5, 0.3, 0.2]
    return design, design.predict(beta), (0, 1, 2, 3)


def brute_criterion(design, f0, S_true, lam, mode):
    c, L = {"noiseless": (3.0, 2.0), "noisy": (7.0, 6.0)}[mode]
    best = None
    for size in range(len(S_true) + 1):
        for S in itertools.combinations(S_true, size):
            if size == 0:
                crit = design.norm_n_sq(f0)
            else:
                phi, _ = eigen.restricted_eig(design.gram, L, list(S), size,
                                              THOROUGH)
                crit = project(design, list(S), f0).residual_norm_sq \
                    + c * lam ** 2 * size / phi
            if best is None or crit < best[0]:
                best = (crit, S)
    return best


@pytest.mark.parametrize("mode", ["noiseless", "noisy"])
def test_oracle_matches_hand_enumeration(instance, mode):
    design, f0, S_true = instance
    lam = 0.6
    sol = oracle.oracle_search(design, f0, S_true, lam, mode=mode,
                               config=THOROUGH)
    crit, S = brute_criterion(design, f0, S_true, lam, mode)
    assert sol.S0 == S
    assert sol.criterion_value == pytest.approx(crit, rel=1e-6)


def test_oracle_large_penalty_prefers_small_sets(instance):
    design, f0, S_true = instance
    sol = oracle.oracle_search(design, f0, S_true, 10.0, mode="noisy")
    assert sol.s0 == 0
    assert sol.criterion_value == pytest.approx(design.norm_n_sq(f0))


def test_oracle_zero_penalty_takes_full_support(instance):
    design, f0, S_true = instance
    sol = oracle.oracle_search(design, f0, S_true, 1e-9, mode="noisy")
    assert sol.S0 == S_true
    assert sol.criterion_value == pytest.approx(0.0, abs=1e-10)
    # projection coefficients recover the generating beta exactly
    assert design.norm_n_sq(sol.fitted - f0) < 1e-18


def test_oracle_budget(instance):
    design, f0, _ = instance
    with pytest.raises(BudgetExceeded):
        oracle.oracle_search(design, f0, range(13), 0.5)


def test_oracle_trace(instance):
    design, f0, S_true = instance
    sol = oracle.oracle_search(design, f0, S_true, 0.6, keep_trace=True,
                               config=THOROUGH)
    assert len(sol.trace) == 2 ** len(S_true)
    crits = [row["criterion"] for row in sol.trace]
    assert sol.criterion_value == pytest.approx(min(crits))


@pytest.mark.parametrize("mode,c,level", [("noisy", 7.0, 6.0),
                                          ("noiseless", 3.0, 2.0)])
def test_scalars_decomposition(instance, mode, c, level):
    design, f0, S_true = instance
    lam = 0.6
    sol = oracle.oracle_search(design, f0, S_true, lam, mode=mode,
                               config=THOROUGH)
    report = eigen.build_eigen_report(design.gram, sol.S0, config=THOROUGH)
    sc = oracle.oracle_scalars(sol, design, f0, report, lam)
    bias = design.norm_n_sq(sol.fitted - f0)
    assert sc.bias_sq == pytest.approx(bias, abs=1e-12)
    if mode == "noisy":
        phi = report.phi_sq[(level, 2 * sol.s0)]
    else:
        phi = report.phi_sq[(level, sol.s0)]
    assert sc.delta_oracle_sq == pytest.approx(
        bias + c * lam ** 2 * sol.s0 / phi, rel=1e-12)
    b_on = np.abs(sol.b0[list(sol.S0)])
    assert sc.b_min == pytest.approx(b_on.min())


def test_false_negative_bound():
    b0 = np.array([2.0, 1.0, 0.1, 0.0])
    beta_hat = np.array([1.8, 0.0, 0.0, 0.0])
    count, bound = oracle.false_negative_bound(beta_hat, b0, 2, 0.5)
    assert count == 1  # only the |b0| = 1.0 coordinate is both large and missed
    err = math.sqrt(0.2 ** 2 + 1.0 + 0.01)
    assert bound == pytest.approx((err / 0.5) ** 2)
    assert count <= bound
    with pytest.raises(ValueError):
        oracle.false_negative_bound(beta_hat, b0, 3, 0.5)
    with pytest.raises(ValueError):
        oracle.false_negative_bound(beta_hat, b0, 1, 0.0)


def test_coefficient_gap_record(instance):
    design, f0, S_true = instance
    sol = oracle.oracle_search(design, f0, S_true, 0.6, mode="noisy",
                               config=THOROUGH)
    beta_true = np.zeros(design.p)
    beta_true[[0, 1, 2, 3]] = [3.0, 2.5, 0.3, 0.2]
    rec = oracle.coefficient_gap_record(sol, design, f0, beta_true, S_true)
    assert rec.name == "coefficient_gap"
    assert rec.lhs == pytest.approx(
        float(np.sum((sol.b0 - beta_true) ** 2)))
    assert rec.passed
