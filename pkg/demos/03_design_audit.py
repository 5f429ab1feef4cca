"""Spectral design audit demo.

Computes the sparse and cone-restricted eigenvalue constants that govern
how well a design supports sparse recovery, and verifies the ordering
relations between them on a correlated design.
"""

import numpy as np

from sparse2stage import build_eigen_report, eigen
from sparse2stage.irrepresentable import design_from_gram

p, rho = 12, 0.5
gram = (1.0 - rho) * np.eye(p) + rho * np.ones((p, p))
design = design_from_gram(gram, 40)
S = [0, 1, 2]

report = build_eigen_report(design.gram, S)
print("equicorrelated design, rho=%.1f, |S|=%d" % (rho, len(S)))
print("  Lambda_max            %.4f" % report.lambda_max)
print("  Lambda_min(S)         %.4f" % report.lambda_min_S)
for N, v in sorted(report.lambda_sparse.items()):
    print("  Lambda_sparse(%d)      %.4f" % (N, v))
for N, v in sorted(report.phi_sparse_sq.items()):
    print("  phi_sparse^2(S,%d)     %.4f" % (N, v))
for (L, N), v in sorted(report.phi_sq.items()):
    print("  phi^2(L=%-4.1f S,%d)     %.4f" % (L, N, v))
for (L, N), v in sorted(report.phi_min_sq.items()):
    print("  phi_min^2(L=%-4.1f %d)   %.4f" % (L, N, v))
print("  certified lower bound %.4f  (method: %s)"
      % (report.certified_lower_sq, report.method))

# the chain phi_min <= phi(L,S,N) <= phi(L,S) <= Lambda_min(S)^2 holds on
# every report; larger cone openings L can only shrink phi
n1, n2 = len(S), 2 * len(S)
for L in (2.0, 6.0):
    chain = (report.phi_min_sq[(L, n2)], report.phi_sq[(L, n2)],
             report.phi_sq[(L, n1)], report.lambda_min_S ** 2)
    print("  L=%.0f chain %s  nondecreasing: %s"
          % (L, " <= ".join("%.4f" % c for c in chain),
             all(a <= b + 1e-9 for a, b in zip(chain, chain[1:]))))

# the oracle-vs-selection trade-off constant for a target sparsity
print("  condition number D(S, 6): %.4f"
      % eigen.condition_D(design.gram, S, 6))
