"""Sparse oracle construction: the projection target f_{S0}, the oracle set
S0 found by exhaustive trade-off search over subsets of the true support,
and the derived scalars entering the bound checks.

The search criterion is ``||f_S - f0||_n^2 + c * lambda_init^2 |S| /
phi^2(L, S)`` with (c, L) = (3, 2) in noiseless mode and (7, 6) in noisy
mode.  Because phi^2 is only available as an upper estimate, the penalty
term is a lower estimate; the per-subset trace records both values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import eigen
from .errors import BudgetExceeded, RankDeficient
from .linalg import DesignMatrix, project
from .reports import BoundRecord

SUBSET_BUDGET_BITS = 12

_MODE_CONSTANTS = {"noiseless": (3.0, 2.0), "noisy": (7.0, 6.0)}


@dataclass(frozen=True)
class OracleSolution:
    S0: tuple
    b0: np.ndarray
    s0: int
    fitted: np.ndarray
    criterion_value: float
    mode: str
    trace: tuple = ()


@dataclass(frozen=True)
class OracleScalars:
    delta_oracle_sq: float
    bias_sq: float
    b_min: float = None
    b_harm: float = None
    bias_variance_ok: bool = None


def oracle_search(design: DesignMatrix, f0, S_true, lambda_init,
                  mode="noisy", config=eigen.DEFAULT_CONFIG,
                  keep_trace=False) -> OracleSolution:
    """Exhaustively enumerate S subsets of S_true and minimize the penalized
    trade-off criterion.  Ties break toward smaller |S|, then lexicographic
    order (both implied by the enumeration order with strict improvement).
    """
    if mode not in _MODE_CONSTANTS:
        raise ValueError("mode must be 'noiseless' or 'noisy'")
    c, L = _MODE_CONSTANTS[mode]
    f0 = np.asarray(f0, dtype=float)
    S_true = sorted(set(int(j) for j in S_true))
    if len(S_true) > SUBSET_BUDGET_BITS:
        raise BudgetExceeded(
            f"|S_true| = {len(S_true)} exceeds the 2^{SUBSET_BUDGET_BITS} "
            "enumeration budget")

    phi_cache = {}

    def phi_sq(S):
        key = tuple(S)
        if key not in phi_cache:
            phi_cache[key] = eigen.restricted_eig(design.gram, L, S, len(S),
                                                  config)[0]
        return phi_cache[key]

    best = None
    trace = []
    for size in range(len(S_true) + 1):
        for S in itertools.combinations(S_true, size):
            if size == 0:
                fit_err = design.norm_n_sq(f0)
                penalty = 0.0
                proj = None
            else:
                try:
                    proj = project(design, S, f0)
                except RankDeficient:
                    trace.append({"S": S, "skipped": "rank_deficient"})
                    continue
                fit_err = proj.residual_norm_sq
                penalty = c * lambda_init ** 2 * size / phi_sq(S)
            crit = fit_err + penalty
            if keep_trace:
                trace.append({"S": S, "fit_err": fit_err, "penalty": penalty,
                              "criterion": crit})
            if best is None or crit < best[0]:
                best = (crit, S, proj)

    crit, S0, proj = best
    if proj is None:
        b0 = np.zeros(design.p)
        fitted = np.zeros(design.n)
    else:
        b0 = proj.coefficients
        fitted = proj.fitted
    return OracleSolution(S0=tuple(S0), b0=b0, s0=len(S0), fitted=fitted,
                          criterion_value=crit, mode=mode,
                          trace=tuple(trace))


def oracle_scalars(sol: OracleSolution, design: DesignMatrix, f0,
                   eigen_report, lambda_init) -> OracleScalars:
    """delta_oracle^2 and the coefficient-size scalars of the oracle.

    Noisy mode: delta_oracle^2 = bias^2 + 7 lam^2 s0 / phi^2(6, S0, 2 s0).
    Noiseless mode: bias^2 + 3 lam^2 s0 / phi^2(2, S0).
    """
    from .twostage import harmonic_mean  # local import, no cycle at module load

    f0 = np.asarray(f0, dtype=float)
    bias_sq = design.norm_n_sq(sol.fitted - f0)
    if sol.s0 == 0:
        return OracleScalars(delta_oracle_sq=bias_sq, bias_sq=bias_sq)
    if sol.mode == "noisy":
        n2 = max(n for (_, n) in eigen_report.phi_sq)
        phi_sq = eigen_report.phi_sq[(6.0, n2)]
        variance = 7.0 * lambda_init ** 2 * sol.s0 / phi_sq
    else:
        phi_sq = eigen_report.phi_sq[(2.0, sol.s0)]
        variance = 3.0 * lambda_init ** 2 * sol.s0 / phi_sq
    b_on = sol.b0[list(sol.S0)]
    return OracleScalars(
        delta_oracle_sq=bias_sq + variance,
        bias_sq=bias_sq,
        b_min=float(np.min(np.abs(b_on))),
        b_harm=harmonic_mean(b_on),
        bias_variance_ok=bool(bias_sq <= variance),
    )


def false_negative_bound(beta_hat, b0, q, delta):
    """Count of missed large coefficients and its l_q bound.

    Returns ``(count, bound)`` with count = |{j : beta_hat_j = 0,
    |b0_j| > delta}| and bound = (||beta_hat - b0||_q / delta)^q.
    """
    if q not in (1, 2):
        raise ValueError("q must be 1 or 2")
    if delta <= 0:
        raise ValueError("delta must be positive")
    beta_hat = np.asarray(beta_hat, dtype=float)
    b0 = np.asarray(b0, dtype=float)
    count = int(np.sum((beta_hat == 0) & (np.abs(b0) > delta)))
    err = float(np.linalg.norm(beta_hat - b0, ord=q))
    return count, (err / delta) ** q


def coefficient_gap_record(sol: OracleSolution, design: DesignMatrix,
                           f0, beta_true, S_true) -> BoundRecord:
    """||b0 - beta_true||_2^2 <= ||f_{S0} - f0||_2^2 / (n Lambda_min^2(S_true))."""
    f0 = np.asarray(f0, dtype=float)
    lam_min, _ = eigen.lambda_extremes(design.gram, S_true)
    lhs = float(np.sum((sol.b0 - np.asarray(beta_true, float)) ** 2))
    bias = design.norm_n_sq(sol.fitted - f0)
    return BoundRecord(
        name="coefficient_gap",
        lhs=lhs,
        rhs=bias / lam_min ** 2 if lam_min > 0 else float("inf"),
        constants={"bias_sq": bias, "lambda_min_Strue": lam_min},
        hypothesis_met=lam_min > 0,
    )
