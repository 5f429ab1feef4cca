"""Sparse two-stage regression toolkit.

Weighted/adaptive/thresholded Lasso estimation, spectral design audits
(sparse and restricted eigenvalues), oracle-set search, irrepresentable
condition checks, and a simulation harness that numerically verifies the
finite-sample oracle inequalities these estimators satisfy.
"""

from . import (cli, eigen, errors, harness, irrepresentable, linalg, oracle,
               reports, solver, twostage)
from .eigen import (ConeSearchConfig, EigenReport, build_eigen_report,
                    condition_D, lambda_extremes, restricted_eig,
                    restricted_eig_min, sparse_max, sparse_min)
from .harness import (BoundReport, ReplicationOutcome, Scenario,
                      big_O_dashboard, default_suite, generate, prepare,
                      run_suite, simulate, summarize, verify_bounds)
from .irrepresentable import (IrrepReport, example_design, irrep_measure,
                              no_false_positive_check, theta_adaptive)
from .linalg import (DesignMatrix, SubsetProjection, load_design_csv,
                     ls_refit, normalize_columns, project)
from .oracle import (OracleScalars, OracleSolution, false_negative_bound,
                     oracle_scalars, oracle_search)
from .reports import BoundRecord
from .solver import (FitResult, KktCertificate, WeightedLassoProblem,
                     false_positive_bound_weighted, kkt_residual, solve)
from .twostage import (TuningReport, TwoStageResult, adaptive_lasso,
                       adaptive_weights, harmonic_mean,
                       lambda_init_from_noise, threshold_refit,
                       tuning_conditions)

__version__ = "0.1.0"
