"""Tests for the weighted-Lasso coordinate-descent solver."""

import numpy as np
import numpy.testing as npt
import pytest

from sparse2stage.linalg import normalize_columns
from sparse2stage.solver import (WeightedLassoProblem, kkt_residual, solve)


def grid_refine_minimum(problem, passes=40, span=3.0, final_step=1e-5):
    """Oracle minimizer: cyclic one-dimensional grid search on the full
    objective, refining the grid step geometrically.  Independent of the
    soft-threshold update formula."""
    p = problem.design.p
    beta = np.zeros(p)
    step = span / 10.0
    while step > final_step / 4.0:
        for _ in range(passes):
            for j in range(p):
                if not np.isfinite(problem.weights[j]):
                    continue
                grid = beta[j] + step * np.arange(-10, 11)
                # always offer exact zero (the kink)
                grid = np.append(grid, 0.0)
                best_v, best_b = None, beta[j]
                for b in grid:
                    beta[j] = b
                    v = problem.objective(beta)
                    if best_v is None or v < best_v:
                        best_v, best_b = v, b
                beta[j] = best_b
        step /= 4.0
    return beta


def random_problem(rng, n, p):
    design = normalize_columns(rng.standard_normal((n, p)))
    beta = np.zeros(p)
    k = rng.integers(1, p + 1)
    beta[rng.choice(p, size=k, replace=False)] = rng.normal(0, 2, size=k)
    y = design.predict(beta) + 0.3 * rng.standard_normal(n)
    lam = float(rng.uniform(0.05, 1.0))
    return WeightedLassoProblem(design, y, lam)


def test_matches_grid_refinement_oracle():
    rng = np.random.default_rng(7)
    for _ in range(10):
        problem = random_problem(rng, n=int(rng.integers(4, 11)),
                                 p=int(rng.integers(2, 5)))
        fit = solve(problem)
        assert fit.converged
        oracle_beta = grid_refine_minimum(problem)
        assert fit.objective <= problem.objective(oracle_beta) + 1e-6


def test_orthonormal_soft_threshold_closed_form():
    rng = np.random.default_rng(8)
    n, p = 20, 12
    raw = np.zeros((n, p))
    raw[:p, :] = np.eye(p)
    design = normalize_columns(raw)
    y = rng.standard_normal(n)
    lam = 0.4
    fit = solve(WeightedLassoProblem(design, y, lam))
    z = design.correlations(y)
    expected = np.sign(z) * np.maximum(np.abs(z) - lam / 2.0, 0.0)
    npt.assert_allclose(fit.beta, expected, atol=1e-10)


def test_infinite_weight_excludes_coordinate():
    rng = np.random.default_rng(9)
    design = normalize_columns(rng.standard_normal((30, 5)))
    y = design.column(2) * 3.0
    w = np.ones(5)
    w[2] = np.inf
    fit = solve(WeightedLassoProblem(design, y, 0.1, weights=w))
    assert fit.beta[2] == 0.0
    assert 2 not in fit.active_set


def test_zero_penalty_on_zero_weight_coordinate():
    rng = np.random.default_rng(10)
    design = normalize_columns(rng.standard_normal((30, 3)))
    beta_true = np.array([1.5, 0.0, 0.0])
    y = design.predict(beta_true)
    w = np.array([0.0, 1.0, 1.0])
    fit = solve(WeightedLassoProblem(design, y, 0.5, weights=w))
    # the unpenalized coordinate carries the fit exactly
    assert fit.converged
    assert abs(fit.beta[0] - 1.5) < 0.2


def test_kkt_certificate_flags_suboptimal_point():
    rng = np.random.default_rng(11)
    design = normalize_columns(rng.standard_normal((25, 4)))
    y = rng.standard_normal(25)
    problem = WeightedLassoProblem(design, y, 0.3)
    fit = solve(problem)
    assert fit.kkt.max_violation <= 1e-8
    bad = fit.beta + 0.5
    assert kkt_residual(problem, bad).max_violation > 1e-3


def test_active_set_matches_nonzeros():
    rng = np.random.default_rng(12)
    problem = random_problem(rng, 40, 8)
    fit = solve(problem)
    npt.assert_array_equal(np.flatnonzero(fit.beta), np.array(fit.active_set))


def test_rejects_bad_inputs():
    rng = np.random.default_rng(13)
    design = normalize_columns(rng.standard_normal((10, 3)))
    y = rng.standard_normal(10)
    with pytest.raises(ValueError):
        WeightedLassoProblem(design, y, -1.0)
    with pytest.raises(ValueError):
        WeightedLassoProblem(design, y, 1.0, weights=np.ones(2))
    with pytest.raises(ValueError):
        WeightedLassoProblem(design, y, 1.0, weights=-np.ones(3))
