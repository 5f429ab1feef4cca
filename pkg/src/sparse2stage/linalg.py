"""Dense linear-algebra substrate: normalized designs, Gram matrices, and
least-squares projections onto coordinate subsets.

Conventions: columns are normalized so that ``||X_j||_2^2 / n == 1`` for every
j, and all norms of fitted n-vectors are the scaled Euclidean norm
``||.||_n = ||.||_2 / sqrt(n)``, stored squared.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import RankDeficient, ZeroColumn

RANK_TOL = 1e-10


@dataclass(frozen=True)
class DesignMatrix:
    """Column-normalized n x p design with its cached Gram matrix X'X/n."""

    X: np.ndarray
    gram: np.ndarray

    def __post_init__(self):
        self.X.setflags(write=False)
        self.gram.setflags(write=False)

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def p(self):
        return self.X.shape[1]

    def column(self, j):
        return self.X[:, j]

    def predict(self, beta):
        return self.X @ beta

    def norm_n_sq(self, f):
        """Squared ||f||_n = ||f||_2^2 / n."""
        f = np.asarray(f, dtype=float)
        return float(f @ f) / self.n

    def correlations(self, r):
        """X' r / n for an n-vector r."""
        return self.X.T @ r / self.n


@dataclass(frozen=True)
class SubsetProjection:
    """Least-squares projection of a target vector onto the span of a subset."""

    subset: tuple
    coefficients: np.ndarray
    fitted: np.ndarray
    residual_norm_sq: float


def normalize_columns(raw) -> DesignMatrix:
    """Rescale every column of ``raw`` so that ||X_j||_2^2 / n = 1.

    Raises ZeroColumn if a column is identically zero.
    """
    raw = np.asarray(raw, dtype=float)
    if raw.ndim != 2:
        raise ValueError("design must be a 2-d array")
    n = raw.shape[0]
    norms = np.linalg.norm(raw, axis=0)
    for j, nrm in enumerate(norms):
        if nrm == 0.0:
            raise ZeroColumn(j)
    X = raw * (np.sqrt(n) / norms)
    gram = X.T @ X / n
    # symmetrize to kill round-off asymmetry
    gram = (gram + gram.T) / 2.0
    return DesignMatrix(X=X, gram=gram)


def _solve_gram_block(design: DesignMatrix, S, rhs):
    """Solve the normal equations on the S-block of the Gram matrix.

    Rejects blocks whose smallest eigenvalue is below RANK_TOL.
    """
    S = list(S)
    block = design.gram[np.ix_(S, S)]
    if np.linalg.eigvalsh(block)[0] < RANK_TOL:
        raise RankDeficient(S)
    cho = scipy.linalg.cho_factor(block, lower=True)
    return scipy.linalg.cho_solve(cho, rhs)


def project(design: DesignMatrix, S, target) -> SubsetProjection:
    """Project ``target`` onto the linear span of the columns in S.

    Returns coefficients supported on S, the fitted n-vector and the squared
    residual ||target - fitted||_n^2. Solved through a Cholesky factorization
    of the S-block of the Gram matrix; raises RankDeficient when that block is
    numerically singular.
    """
    target = np.asarray(target, dtype=float)
    S = sorted(set(int(j) for j in S))
    beta = np.zeros(design.p)
    if not S:
        fitted = np.zeros(design.n)
        return SubsetProjection(
            subset=(), coefficients=beta, fitted=fitted,
            residual_norm_sq=design.norm_n_sq(target),
        )
    rhs = design.X[:, S].T @ target / design.n
    beta_S = _solve_gram_block(design, S, rhs)
    beta[S] = beta_S
    fitted = design.X[:, S] @ beta_S
    return SubsetProjection(
        subset=tuple(S), coefficients=beta, fitted=fitted,
        residual_norm_sq=design.norm_n_sq(target - fitted),
    )


def ls_refit(design: DesignMatrix, S, Y) -> SubsetProjection:
    """Ordinary least squares on the columns in S (the refit entry point)."""
    return project(design, S, Y)


def load_design_csv(path, header=False) -> np.ndarray:
    """Read a design or response matrix from CSV (rows = observations)."""
    skip = 1 if header else 0
    return np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2)
