"""Two-stage estimators built from an initial Lasso fit: the adaptive Lasso
and the thresholded Lasso with least-squares refitting, plus the tuning-rule
calculators for the penalty levels."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyOracleSet, MissingEigenValue, ZeroCoefficient
from .linalg import DesignMatrix, ls_refit
from .solver import (DEFAULT_MAX_ITER, DEFAULT_TOL, FitResult,
                     WeightedLassoProblem, solve)

# initial coefficients below this are treated as exactly zero (excluded);
# finite adaptive weights are capped here to avoid overflow
TINY_COEF = 1e-12
MAX_WEIGHT = 1e12


@dataclass(frozen=True)
class TwoStageResult:
    initial: FitResult
    method: str                  # "adaptive" | "threshold_refit"
    final_beta: np.ndarray
    final_active: tuple
    threshold: float = None      # threshold mode
    lambda_adap: float = None    # adaptive mode
    final_fit: FitResult = None  # adaptive mode second-stage fit


@dataclass(frozen=True)
class TuningReport:
    lambda_init: float
    lambda_thres_AA: float
    lambda_adap_BB: float
    lambda_adap_CC: float = None
    harmonic_mean: float = None
    b_min: float = None
    constants: dict = field(default_factory=dict)


def lambda_init_from_noise(sigma, t, n, p):
    """Noise-calibrated initial penalty 4*sigma*sqrt((2t + 2 log p)/n)."""
    if sigma <= 0 or t <= 0 or n <= 0 or p <= 0:
        raise ValueError("sigma, t, n, p must all be positive")
    return 4.0 * sigma * math.sqrt((2.0 * t + 2.0 * math.log(p)) / n)


def adaptive_weights(initial: FitResult) -> np.ndarray:
    """Second-stage weights 1/|beta_init_j|; zero (or tiny) initial
    coefficients exclude the coordinate via an infinite weight."""
    beta = np.asarray(initial.beta, dtype=float)
    w = np.full(beta.shape, np.inf)
    big = np.abs(beta) >= TINY_COEF
    w[big] = np.minimum(1.0 / np.abs(beta[big]), MAX_WEIGHT)
    return w


def adaptive_lasso(design: DesignMatrix, response, lambda_init, lambda_adap,
                   tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER,
                   initial: FitResult = None) -> TwoStageResult:
    """Two-stage adaptive Lasso.

    Stage 1 is the plain Lasso at ``lambda_init`` (reused if supplied);
    stage 2 solves the weighted problem with weights 1/|beta_init| and
    penalty lambda_init * lambda_adap.
    """
    if lambda_init <= 0 or lambda_adap <= 0:
        raise ValueError("penalty scales must be positive")
    if initial is None:
        initial = solve(
            WeightedLassoProblem(design, response, lambda_init), tol, max_iter
        )
    w = adaptive_weights(initial)
    second = solve(
        WeightedLassoProblem(design, response, lambda_init, lambda_adap, w),
        tol, max_iter,
    )
    return TwoStageResult(
        initial=initial, method="adaptive",
        final_beta=second.beta, final_active=second.active_set,
        lambda_adap=lambda_adap, final_fit=second,
    )


def threshold_refit(design: DesignMatrix, Y, initial: FitResult,
                    delta) -> TwoStageResult:
    """Keep coordinates with |beta_init_j| > delta (strict), then refit by
    ordinary least squares on the survivors."""
    if delta < 0:
        raise ValueError("threshold must be nonnegative")
    survivors = tuple(
        int(j) for j in np.flatnonzero(np.abs(initial.beta) > delta)
    )
    refit = ls_refit(design, survivors, Y)
    return TwoStageResult(
        initial=initial, method="threshold_refit",
        final_beta=refit.coefficients, final_active=tuple(refit.subset),
        threshold=float(delta),
    )


def harmonic_mean(b0_on_S0):
    """Square root of the harmonic mean of the squared coefficients:
    ( (1/s0) sum_j 1/|b_j|^2 )^(-1/2)."""
    b = np.asarray(b0_on_S0, dtype=float)
    if b.size == 0:
        raise EmptyOracleSet("harmonic mean needs a nonempty coefficient set")
    if np.any(b == 0):
        raise ZeroCoefficient("harmonic mean undefined with zero coefficients")
    return float(1.0 / math.sqrt(np.mean(1.0 / b ** 2)))


def tuning_conditions(eigen_report, lambda_init, b0_on_S0=None,
                      c_AA=1.0, c_BB=1.0, c_CC=1.0, delta=None) -> TuningReport:
    """Recommended penalty levels from the eigen constants.

    lambda_thres(AA) = c_AA * lambda_init / phi^2(6, S0, 2 s0)
    lambda_adap(BB)  = c_BB * lambda_init * Lambda_sparse(s0)
                       / phi_min^3(6, S0, 2 s0)
    lambda_adap(CC)  = c_CC * harmonic mean of the oracle coefficients
    """
    s0_keys = sorted({n for (_, n) in eigen_report.phi_sq})
    if not s0_keys:
        raise MissingEigenValue("eigen report carries no phi values")
    n2 = s0_keys[-1]
    try:
        phi6_sq = eigen_report.phi_sq[(6.0, n2)]
        phi_min6_sq = eigen_report.phi_min_sq[(6.0, n2)]
        lam_sparse = eigen_report.lambda_sparse[min(s0_keys)]
    except KeyError as exc:
        raise MissingEigenValue(f"missing eigen constant: {exc}") from exc
    lam_thres = c_AA * lambda_init / phi6_sq
    lam_adap = c_BB * lambda_init * lam_sparse / phi_min6_sq ** 1.5
    harm = b_min = lam_cc = None
    if b0_on_S0 is not None and len(b0_on_S0):
        harm = harmonic_mean(b0_on_S0)
        b_min = float(np.min(np.abs(b0_on_S0)))
        lam_cc = c_CC * harm
    if delta is not None and lam_adap < delta:
        warnings.warn(
            "lambda_adap below the threshold level delta; the noisy-case "
            "analysis expects lambda_adap >= delta", stacklevel=2)
    return TuningReport(
        lambda_init=lambda_init,
        lambda_thres_AA=lam_thres,
        lambda_adap_BB=lam_adap,
        lambda_adap_CC=lam_cc,
        harmonic_mean=harm,
        b_min=b_min,
        constants={
            "c_AA": c_AA, "c_BB": c_BB, "c_CC": c_CC,
            "phi_sq_6": phi6_sq, "phi_min_sq_6": phi_min6_sq,
            "lambda_sparse_s0": lam_sparse,
        },
    )
