"""Tests for the weighted irrepresentable condition and the two-block
worst-case design."""

import math

import numpy as np
import numpy.testing as npt
import pytest

from sparse2stage.irrepresentable import (IrrepReport, design_from_gram,
                                          example_design, irrep_measure,
                                          irrep_measure_corners,
                                          no_false_positive_check,
                                          theta_adaptive)
from sparse2stage.errors import InvalidUnitVector, SingularBlock
from sparse2stage.linalg import normalize_columns
from sparse2stage.solver import WeightedLassoProblem, solve


@pytest.mark.parametrize("rho", [0.0, 0.25, 0.5, 0.9])
def test_example_design_spectrum(rho):
    gram = example_design(3, 10, rho)
    ev = np.linalg.eigvalsh(gram)
    assert ev[0] == pytest.approx(1.0 - rho, abs=1e-9)
    assert ev[-1] == pytest.approx(1.0 + rho, abs=1e-9)
    npt.assert_allclose(np.diag(gram), 1.0)


def test_example_design_validation():
    with pytest.raises(ValueError):
        example_design(3, 10, 1.0)
    with pytest.raises(ValueError):
        example_design(0, 10, 0.5)
    with pytest.raises(InvalidUnitVector):
        example_design(3, 10, 0.5, c1=np.array([1.0, 1.0, 1.0]))


def test_example_design_closed_form_measure():
    """On the two-block design only one off-block operator row is nonzero,
    so the measure has the closed form rho * sum(w_S) / (sqrt(s) * w_s);
    verified against the dense evaluation for random weights."""
    rng = np.random.default_rng(50)
    s, p, rho = 3, 12, 0.6
    gram = example_design(s, p, rho)
    S = list(range(s))
    c1 = np.ones(s) / math.sqrt(s)
    for _ in range(20):
        w = rng.uniform(0.5, 2.0, size=p)
        rep = irrep_measure(gram, S, w)
        # only the first off-block row is nonzero: rho * c1' diag(w_S) / w_s
        expected = rho * float(np.abs(c1 * w[:s]).sum()) / w[s]
        assert rep.measure == pytest.approx(expected, abs=1e-10)


def test_measure_matches_corner_enumeration():
    rng = np.random.default_rng(51)
    for trial in range(5):
        design = normalize_columns(rng.standard_normal((30, 9)))
        S = [0, 2, 5]
        w = rng.uniform(0.3, 3.0, size=9)
        fast = irrep_measure(design.gram, S, w).measure
        brute = irrep_measure_corners(design.gram, S, w)
        assert fast == pytest.approx(brute, abs=1e-12)


def test_sufficient_condition_implies_measure():
    """Scanning designs and weights: whenever the norm condition holds the
    exact measure is below one (the report itself asserts this too)."""
    rng = np.random.default_rng(52)
    seen_sufficient = 0
    for trial in range(20):
        design = normalize_columns(rng.standard_normal((40, 8)))
        w = rng.uniform(0.5, 2.0, size=8)
        rep = irrep_measure(design.gram, [0, 1], w)
        assert isinstance(rep, IrrepReport)
        if rep.sufficient_holds:
            seen_sufficient += 1
            assert rep.holds
    assert seen_sufficient > 0


def test_singular_block_raises():
    gram = np.ones((4, 4))
    with pytest.raises(SingularBlock):
        irrep_measure(gram, [0, 1], np.ones(4))


def test_theta_adaptive_zero_cross():
    assert theta_adaptive(np.eye(6), [0, 1]) == pytest.approx(0.0)


def test_theta_adaptive_increases_with_rho():
    vals = [theta_adaptive(example_design(2, 8, rho), [0, 1], seed=7)
            for rho in (0.1, 0.4, 0.8)]
    assert vals[0] < vals[1] < vals[2]


def test_design_from_gram_roundtrip():
    gram = example_design(2, 6, 0.4)
    design = design_from_gram(gram, 10)
    npt.assert_allclose(design.X.T @ design.X / 10.0, gram, atol=1e-10)
    with pytest.raises(ValueError):
        design_from_gram(gram, 5)


def test_no_false_positives_when_measure_small():
    """Noiseless weighted Lasso on a design where the condition holds keeps
    the active set inside the true support."""
    rng = np.random.default_rng(53)
    s, p, n = 2, 8, 20
    gram = example_design(s, p, 0.3)
    design = design_from_gram(gram, n)
    beta = np.zeros(p)
    beta[:s] = [3.0, 2.0]
    y = design.predict(beta)
    rep = irrep_measure(gram, list(range(s)), np.ones(p))
    assert rep.holds
    fit = solve(WeightedLassoProblem(design, y, 0.2))
    assert no_false_positive_check(fit, range(s))
    assert not no_false_positive_check(fit, [5])
