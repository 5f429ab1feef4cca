"""Classical, sparse, and restricted eigenvalue quantities of a Gram matrix.

Naming: Lambda-quantities are reported on the eigenvalue *square-root* scale
(Lambda_max(S) etc.), while the restricted-eigenvalue routines return the
squared quantity phi^2 directly, matching how the two families are defined.

The restricted-eigenvalue program is nonconvex.  ``restricted_eig`` returns a
multi-start projected-descent value, which is an UPPER bound on the true
phi^2 (any feasible point upper-bounds a minimum), together with a crude
certified lower bound (the smallest eigenvalue of the full Gram matrix).
When these estimates feed an oracle-inequality check, the upper bound makes
the checked right-hand side smaller, so a passing check passes a fortiori.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import CombinatorialBudgetExceeded

ENUM_BUDGET = 10 ** 6
CONE_ENUM_BUDGET = 10 ** 4


@dataclass(frozen=True)
class ConeSearchConfig:
    restarts: int = 64
    max_descent_steps: int = 500
    step_shrink: float = 0.5
    seed: int = 42
    # how many candidate supersets to draw when enumeration exceeds budget
    candidate_samples: int = 200
    # supersets are enumerated exhaustively up to this count, sampled beyond;
    # sampling fewer candidates only raises the phi^2 upper estimate, which
    # keeps downstream inequality checks on the strict side
    enum_budget: int = CONE_ENUM_BUDGET
    # "as_stated": the magnitude cap in the cone applies over S and the
    # off-superset coordinates; "inner": it applies over N\S only
    constraint_reading: str = "as_stated"

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.constraint_reading not in ("as_stated", "inner"):
            raise ValueError("constraint_reading must be 'as_stated' or 'inner'")


DEFAULT_CONFIG = ConeSearchConfig()


@dataclass
class EigenReport:
    """Bundle of eigenvalue quantities for one oracle set."""

    lambda_max: float = None
    lambda_max_S: float = None
    lambda_min_S: float = None
    lambda_sparse: dict = field(default_factory=dict)   # N -> value (and mode)
    phi_sparse_sq: dict = field(default_factory=dict)   # (S, N) keyed by N
    phi_sq: dict = field(default_factory=dict)          # (L, N) -> estimate
    phi_min_sq: dict = field(default_factory=dict)      # (L, N) -> estimate
    certified_lower_sq: float = None
    method: str = "exact_enum"
    condition_d: float = None


def lambda_extremes(gram, S):
    """(Lambda_min(S), Lambda_max(S)): square roots of the extreme
    eigenvalues of the S-block of the Gram matrix."""
    S = sorted(set(int(j) for j in S))
    if not S:
        raise ValueError("S must be nonempty")
    ev = np.linalg.eigvalsh(np.asarray(gram)[np.ix_(S, S)])
    lo = max(ev[0], 0.0)
    return math.sqrt(lo), math.sqrt(ev[-1])


def lambda_max_full(gram):
    """Lambda_max of the whole Gram matrix (square-root scale)."""
    return math.sqrt(max(np.linalg.eigvalsh(np.asarray(gram))[-1], 0.0))


def _check_exact_budget(count):
    if count > ENUM_BUDGET:
        raise CombinatorialBudgetExceeded(count, ENUM_BUDGET)


def sparse_max(gram, N, mode="exact"):
    """Maximal sparse eigenvalue Lambda_sparse(N) = max over |set|=N of
    Lambda_max(set).

    Greedy mode grows the set by best marginal increase; its value is a lower
    estimate of the true maximum.
    """
    gram = np.asarray(gram)
    p = gram.shape[0]
    if not 1 <= N <= p:
        raise ValueError("need 1 <= N <= p")
    if mode == "exact":
        _check_exact_budget(math.comb(p, N))
        best = 0.0
        for subset in itertools.combinations(range(p), N):
            best = max(best, lambda_extremes(gram, subset)[1])
        return best
    if mode != "greedy":
        raise ValueError("mode must be 'exact' or 'greedy'")
    chosen = []
    remaining = set(range(p))
    best = 0.0
    for _ in range(N):
        pick, pick_val = None, -1.0
        for j in remaining:
            val = lambda_extremes(gram, chosen + [j])[1]
            if val > pick_val:
                pick, pick_val = j, val
        chosen.append(pick)
        remaining.discard(pick)
        best = pick_val
    return best


def sparse_min(gram, S, N, mode="exact"):
    """Minimal sparse eigenvalue phi_sparse(S, N) = min over supersets of S of
    size N of Lambda_min(superset).

    Greedy mode grows S by the element minimizing the running Lambda_min and
    returns an upper estimate of the true minimum.
    """
    gram = np.asarray(gram)
    p = gram.shape[0]
    S = sorted(set(int(j) for j in S))
    if len(S) > N:
        raise ValueError("need |S| <= N")
    rest = [j for j in range(p) if j not in S]
    if mode == "exact":
        _check_exact_budget(math.comb(len(rest), N - len(S)))
        worst = math.inf
        for extra in itertools.combinations(rest, N - len(S)):
            worst = min(worst, lambda_extremes(gram, S + list(extra))[0])
        return worst
    if mode != "greedy":
        raise ValueError("mode must be 'exact' or 'greedy'")
    chosen = list(S)
    remaining = set(rest)
    worst = lambda_extremes(gram, chosen)[0] if chosen else math.inf
    while len(chosen) < N:
        pick, pick_val = None, math.inf
        for j in remaining:
            val = lambda_extremes(gram, chosen + [j])[0]
            if val < pick_val:
                pick, pick_val = j, val
        chosen.append(pick)
        remaining.discard(pick)
        worst = pick_val
    return worst


def _candidate_supersets(p, S, N, config, exact_sizes=True):
    """Supersets of S with size exactly N (exact_sizes) or in [|S|, N].

    Enumerates exhaustively within CONE_ENUM_BUDGET, otherwise draws uniform
    samples with a seed-derived generator (always including S itself when
    allowed and the exact-size draws).
    """
    S = sorted(S)
    rest = [j for j in range(p) if j not in set(S)]
    sizes = [N - len(S)] if exact_sizes else list(range(0, N - len(S) + 1))
    total = sum(math.comb(len(rest), k) for k in sizes)
    if total <= config.enum_budget:
        for k in sizes:
            for extra in itertools.combinations(rest, k):
                yield tuple(S) + extra
        return
    rng = np.random.default_rng([config.seed, p, N, len(S)])
    if not exact_sizes:
        yield tuple(S)
    seen = set()
    for _ in range(config.candidate_samples):
        k = int(rng.choice(sizes))
        extra = tuple(sorted(rng.choice(len(rest), size=k, replace=False)))
        cand = tuple(S) + tuple(rest[i] for i in extra)
        if cand not in seen:
            seen.add(cand)
            yield cand


def _project_cone(beta, calN, S, L, p, reading):
    """Project a point onto (a feasible subset of) the restriction cone,
    keeping ||beta_calN||_2 = 1.  Heuristic, but the output is always
    feasible, so any objective value at it upper-bounds the cone minimum."""
    beta = beta.copy()
    calN = list(calN)
    mask = np.zeros(p, dtype=bool)
    mask[calN] = True
    nrm = np.linalg.norm(beta[mask])
    if nrm < 1e-12:
        return None
    beta /= nrm
    off = ~mask
    n_off = int(off.sum())
    if n_off == 0:
        return beta
    l1_cap = L * math.sqrt(len(calN))
    if reading == "as_stated":
        # off-superset entries share one magnitude, capped by the smallest
        # |beta_j| over S (over calN when S == calN)
        cap_idx = [j for j in S] if set(S) != set(calN) else calN
        cap = float(np.min(np.abs(beta[cap_idx]))) if cap_idx else math.inf
        m = float(np.mean(np.abs(beta[off])))
        m = min(m, cap, l1_cap / n_off)
        signs = np.where(beta[off] >= 0, 1.0, -1.0)
        beta[off] = m * signs
    else:
        inner = [j for j in calN if j not in set(S)]
        cap = float(np.min(np.abs(beta[inner]))) if inner else math.inf
        beta[off] = np.clip(beta[off], -cap, cap)
        l1 = float(np.abs(beta[off]).sum())
        if l1 > l1_cap and l1 > 0:
            beta[off] *= l1_cap / l1
    return beta


def _cone_descent(gram, calN, S, L, config, start, rng):
    """Projected gradient descent of beta' Gram beta over the cone."""
    p = gram.shape[0]
    beta = _project_cone(start, calN, S, L, p, config.constraint_reading)
    if beta is None:
        return math.inf
    obj = float(beta @ gram @ beta)
    step = 0.5
    for _ in range(config.max_descent_steps):
        grad = 2.0 * (gram @ beta)
        cand = _project_cone(beta - step * grad, calN, S, L, p,
                             config.constraint_reading)
        if cand is not None:
            cand_obj = float(cand @ gram @ cand)
            if cand_obj < obj - 1e-14:
                beta, obj = cand, cand_obj
                continue
        step *= config.step_shrink
        if step < 1e-10:
            break
    return obj


def _min_over_cone(gram, calN, S, L, config, cand_index):
    """Multi-start minimum of ||f_beta||^2 over the (L, S, calN) cone."""
    p = gram.shape[0]
    calN = list(calN)
    rng = np.random.default_rng([config.seed, cand_index])
    block = gram[np.ix_(calN, calN)]
    evals, evecs = np.linalg.eigh(block)
    best = math.inf
    # deterministic start: the block's bottom eigenvector with no off mass
    start = np.zeros(p)
    start[calN] = evecs[:, 0]
    best = min(best, _cone_descent(gram, calN, S, L, config, start, rng))
    for _ in range(config.restarts - 1):
        start = np.zeros(p)
        start[calN] = rng.standard_normal(len(calN))
        start[[j for j in range(p) if j not in set(calN)]] = (
            0.3 * rng.standard_normal(p - len(calN))
        )
        best = min(best, _cone_descent(gram, calN, S, L, config, start, rng))
    return best


def restricted_eig(gram, L, S, N, config=DEFAULT_CONFIG):
    """(L, S, N)-restricted eigenvalue phi^2(L, S, N).

    Returns ``(estimate_sq, certified_lower_sq)``: a multi-start upper
    estimate of phi^2 and the smallest eigenvalue of the full Gram matrix
    (a valid lower bound, possibly 0 when p > n).
    """
    gram = np.asarray(gram, dtype=float)
    p = gram.shape[0]
    S = sorted(set(int(j) for j in S))
    if not S:
        raise ValueError("S must be nonempty")
    if not len(S) <= N <= p:
        raise ValueError("need |S| <= N <= p")
    best = math.inf
    for idx, calN in enumerate(_candidate_supersets(p, S, N, config,
                                                   exact_sizes=False)):
        best = min(best, _min_over_cone(gram, calN, S, L, config, idx))
    certified = float(max(np.linalg.eigvalsh(gram)[0], 0.0))
    return best, certified


def restricted_eig_min(gram, L, S, N, config=DEFAULT_CONFIG):
    """Minimal restricted eigenvalue phi_min^2(L, S, N): the minimum of
    phi^2(L, calN) over supersets calN of S with |calN| = N."""
    gram = np.asarray(gram, dtype=float)
    p = gram.shape[0]
    S = sorted(set(int(j) for j in S))
    best = math.inf
    for calN in _candidate_supersets(p, S, N, config, exact_sizes=True):
        val, _ = restricted_eig(gram, L, calN, len(calN), config)
        best = min(best, val)
    return best


def restricted_eig_alternate(gram, S, config=DEFAULT_CONFIG):
    """Lower-bound companion program for phi^2(L, S, 2|S|): minimize
    ||f_beta||^2 over supersets of size 2|S| with ||beta_off||_2 <= 1 and
    ||beta_superset||_2 = 1 (multi-start value)."""
    gram = np.asarray(gram, dtype=float)
    p = gram.shape[0]
    S = sorted(set(int(j) for j in S))
    N = min(2 * len(S), p)

    def project(beta, calN):
        beta = beta.copy()
        mask = np.zeros(p, dtype=bool)
        mask[list(calN)] = True
        nrm = np.linalg.norm(beta[mask])
        if nrm < 1e-12:
            return None
        beta /= nrm
        off_norm = np.linalg.norm(beta[~mask])
        if off_norm > 1.0:
            beta[~mask] /= off_norm
        return beta

    best = math.inf
    for idx, calN in enumerate(_candidate_supersets(p, S, N, config,
                                                    exact_sizes=True)):
        rng = np.random.default_rng([config.seed, 7, idx])
        block = gram[np.ix_(list(calN), list(calN))]
        evals, evecs = np.linalg.eigh(block)
        starts = [np.zeros(p)]
        starts[0][list(calN)] = evecs[:, 0]
        for _ in range(config.restarts - 1):
            s = 0.3 * rng.standard_normal(p)
            s[list(calN)] = rng.standard_normal(len(calN))
            starts.append(s)
        for start in starts:
            beta = project(start, calN)
            if beta is None:
                continue
            obj = float(beta @ gram @ beta)
            step = 0.5
            for _ in range(config.max_descent_steps):
                cand = project(beta - step * 2.0 * (gram @ beta), calN)
                if cand is not None:
                    cand_obj = float(cand @ gram @ cand)
                    if cand_obj < obj - 1e-14:
                        beta, obj = cand, cand_obj
                        continue
                step *= config.step_shrink
                if step < 1e-10:
                    break
            best = min(best, obj)
    return best


def condition_D(gram, S0, s_star, config=DEFAULT_CONFIG, sparse_mode="exact"):
    """Ratio D(s*, s0) = Lambda_sparse^2(s*) * s0 / (phi^2(2, S0) * s*)."""
    S0 = sorted(set(int(j) for j in S0))
    s0 = len(S0)
    if s_star < s0:
        raise ValueError("need s_star >= |S0|")
    lam = sparse_max(gram, s_star, mode=sparse_mode)
    phi_sq, _ = restricted_eig(gram, 2.0, S0, s0, config)
    return lam ** 2 * s0 / (phi_sq * s_star)


def build_eigen_report(gram, S0, config=DEFAULT_CONFIG, levels=(2.0, 6.0),
                       sparse_mode="auto", with_min=True):
    """Assemble the eigen quantities the two-stage tuning rules and the
    bound checks consume, for one oracle set S0."""
    gram = np.asarray(gram, dtype=float)
    p = gram.shape[0]
    S0 = sorted(set(int(j) for j in S0))
    s0 = len(S0)
    report = EigenReport()
    report.lambda_max = lambda_max_full(gram)
    report.certified_lower_sq = float(max(np.linalg.eigvalsh(gram)[0], 0.0))
    if s0 == 0:
        return report
    report.lambda_min_S, report.lambda_max_S = lambda_extremes(gram, S0)
    n2 = min(2 * s0, p)

    def pick_mode(count):
        if sparse_mode != "auto":
            return sparse_mode
        return "exact" if count <= ENUM_BUDGET else "greedy"

    report.lambda_sparse[s0] = sparse_max(gram, s0,
                                          mode=pick_mode(math.comb(p, s0)))
    report.phi_sparse_sq[n2] = sparse_min(
        gram, S0, n2, mode=pick_mode(math.comb(p - s0, n2 - s0))) ** 2
    for L in levels:
        # every value below is an upper estimate of the corresponding phi^2;
        # the ordering chain phi_min <= phi(L,S,N) <= phi(L,S) <= Lambda_min(S)
        # (and phi(L,S,N) <= phi_sparse(S,N)) holds for the true quantities,
        # so clamping each entry by the estimates of the larger chain members
        # keeps it a valid upper estimate while making the reported chain
        # hold exactly
        phi_S = min(restricted_eig(gram, L, S0, s0, config)[0],
                    report.lambda_min_S ** 2)
        phi_SN = min(restricted_eig(gram, L, S0, n2, config)[0],
                     phi_S, report.phi_sparse_sq[n2])
        report.phi_sq[(L, s0)] = phi_S
        report.phi_sq[(L, n2)] = phi_SN
        if with_min:
            report.phi_min_sq[(L, n2)] = min(
                restricted_eig_min(gram, L, S0, n2, config), phi_SN)
    report.method = "exact_enum" \
        if math.comb(p - s0, n2 - s0) <= config.enum_budget \
        else "multistart_upper"
    return report
