"""Tests for sparse and restricted eigenvalue computations."""

import itertools
import math

import numpy as np
import pytest

from sparse2stage import eigen
from sparse2stage.errors import CombinatorialBudgetExceeded
from sparse2stage.linalg import normalize_columns

THOROUGH = eigen.ConeSearchConfig(restarts=48, max_descent_steps=300)


def random_gram(rng, n, p):
    return normalize_columns(rng.standard_normal((n, p))).gram


def test_lambda_extremes_identity():
    lo, hi = eigen.lambda_extremes(np.eye(6), [0, 3, 5])
    assert lo == pytest.approx(1.0)
    assert hi == pytest.approx(1.0)


def test_sparse_max_exact_enumeration_oracle():
    rng = np.random.default_rng(20)
    gram = random_gram(rng, 30, 7)
    for N in (1, 2, 3):
        brute = max(
            eigen.lambda_extremes(gram, s)[1]
            for s in itertools.combinations(range(7), N))
        assert eigen.sparse_max(gram, N) == pytest.approx(brute, abs=1e-12)


def test_sparse_max_greedy_is_lower_estimate():
    rng = np.random.default_rng(21)
    gram = random_gram(rng, 40, 9)
    for N in (2, 3, 4):
        assert eigen.sparse_max(gram, N, mode="greedy") <= \
            eigen.sparse_max(gram, N) + 1e-12


def test_sparse_min_exact_enumeration_oracle():
    rng = np.random.default_rng(22)
    gram = random_gram(rng, 30, 7)
    S = [1, 4]
    for N in (2, 3, 4):
        rest = [j for j in range(7) if j not in S]
        brute = min(
            eigen.lambda_extremes(gram, S + list(extra))[0]
            for extra in itertools.combinations(rest, N - len(S)))
        assert eigen.sparse_min(gram, S, N) == pytest.approx(brute, abs=1e-12)


def test_sparse_min_greedy_is_upper_estimate():
    rng = np.random.default_rng(23)
    gram = random_gram(rng, 40, 9)
    S = [0, 5]
    for N in (3, 4, 5):
        assert eigen.sparse_min(gram, S, N, mode="greedy") >= \
            eigen.sparse_min(gram, S, N) - 1e-12


def test_enumeration_budget_enforced():
    gram = np.eye(40)
    with pytest.raises(CombinatorialBudgetExceeded):
        eigen.sparse_max(gram, 20)


def test_restricted_eig_identity_is_one():
    gram = np.eye(8)
    est, cert = eigen.restricted_eig(gram, 2.0, [0, 1], 2, THOROUGH)
    # for the identity, beta' I beta = 1 + ||off||^2 >= 1 on the unit sphere
    assert est == pytest.approx(1.0, abs=1e-9)
    assert cert == pytest.approx(1.0, abs=1e-12)


def test_restricted_eig_upper_bounded_by_block_min():
    """phi(L, S) can never exceed Lambda_min(S): the bottom eigenvector of
    the S-block with zero off-support mass is feasible."""
    rng = np.random.default_rng(24)
    gram = random_gram(rng, 30, 6)
    for S in ([0, 1], [2, 4, 5]):
        est, _ = eigen.restricted_eig(gram, 3.0, S, len(S), THOROUGH)
        lam_min = eigen.lambda_extremes(gram, S)[0]
        assert est <= lam_min ** 2 + 1e-9


def test_restricted_eig_monotone_in_L():
    """A larger L enlarges the cone, so phi^2 cannot increase."""
    rng = np.random.default_rng(25)
    gram = random_gram(rng, 25, 6)
    S = [0, 3]
    vals = [eigen.restricted_eig(gram, L, S, 2, THOROUGH)[0]
            for L in (0.5, 2.0, 6.0)]
    assert vals[0] >= vals[1] - 1e-9
    assert vals[1] >= vals[2] - 1e-9


def test_ordering_chain_exact_mode():
    """phi_min <= phi(L,S,N) <= phi(L,S) <= Lambda_min(S)^2 and
    phi_sparse(S,N)^2 >= phi(L,S,N) on every reported level and size."""
    rng = np.random.default_rng(26)
    for trial in range(3):
        gram = random_gram(rng, 30, 6)
        S = [0, 1]
        report = eigen.build_eigen_report(gram, S, config=THOROUGH)
        n1, n2 = len(S), 2 * len(S)
        lam_min_sq = report.lambda_min_S ** 2
        for lvl in sorted({lvl for (lvl, _) in report.phi_sq}):
            phi_S = report.phi_sq[(lvl, n1)]
            phi_SN = report.phi_sq[(lvl, n2)]
            phi_min = report.phi_min_sq[(lvl, n2)]
            assert phi_min <= phi_SN + 1e-9
            assert phi_SN <= phi_S + 1e-9
            assert phi_S <= lam_min_sq + 1e-9
            assert report.phi_sparse_sq[n2] >= phi_SN - 1e-9


def test_lambda_max_sqrt_k_relation():
    """Lambda_max of a size-ks block is at most sqrt(k) Lambda_sparse(s)."""
    rng = np.random.default_rng(27)
    gram = random_gram(rng, 40, 8)
    s, k = 2, 3
    lam_sparse = eigen.sparse_max(gram, s)
    for calN in itertools.combinations(range(8), k * s):
        lam = eigen.lambda_extremes(gram, calN)[1]
        assert lam <= math.sqrt(k) * lam_sparse + 1e-9


def test_condition_D_identity():
    # identity design: Lambda_sparse = phi = 1, so D = s0 / s_star
    gram = np.eye(10)
    d = eigen.condition_D(gram, [0, 1], 4, THOROUGH)
    assert d == pytest.approx(0.5, abs=1e-6)


def test_build_eigen_report_contents():
    rng = np.random.default_rng(28)
    gram = random_gram(rng, 30, 6)
    report = eigen.build_eigen_report(gram, [0, 1], config=THOROUGH)
    assert set(report.lambda_sparse) == {2}
    assert set(report.phi_sparse_sq) == {4}
    assert (2.0, 2) in report.phi_sq and (6.0, 4) in report.phi_sq
    assert (2.0, 4) in report.phi_min_sq and (6.0, 4) in report.phi_min_sq
    assert report.lambda_min_S <= report.lambda_max_S <= report.lambda_max


def test_constraint_reading_inner_no_tighter_than_stated():
    """The as-stated cone is a subset of the elementwise-capped cone, so its
    minimum (our phi^2 estimate) is at least the inner-reading value minus
    search noise; both must stay within [certified, Lambda_min^2]."""
    rng = np.random.default_rng(29)
    gram = random_gram(rng, 25, 6)
    S = [0, 1]
    stated, cert = eigen.restricted_eig(gram, 2.0, S, 4, THOROUGH)
    inner_cfg = eigen.ConeSearchConfig(
        restarts=48, max_descent_steps=300, constraint_reading="inner")
    inner, _ = eigen.restricted_eig(gram, 2.0, S, 4, inner_cfg)
    lam_min_sq = eigen.lambda_extremes(gram, S)[0] ** 2
    for val in (stated, inner):
        assert cert - 1e-9 <= val <= lam_min_sq + 1e-9
