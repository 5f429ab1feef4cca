"""Irrepresentable-condition demo.

The weighted irrepresentable measure decides whether a noiseless weighted
Lasso can produce false positives.  The two-block worst-case design makes
the measure a simple closed form in the correlation level rho, so the
phase transition at measure = 1 is easy to see.
"""

import numpy as np

from sparse2stage import (WeightedLassoProblem, irrep_measure, solve)
from sparse2stage.irrepresentable import (design_from_gram, example_design,
                                          no_false_positive_check)

s, p = 3, 12
S = list(range(s))
beta = np.zeros(p)
beta[:s] = [3.0, 2.0, 1.5]

print("rho   measure  holds  false positives of the noiseless fit")
for rho in (0.1, 0.3, 0.5, 0.57, 0.6, 0.8):
    gram = example_design(s, p, rho)
    rep = irrep_measure(gram, S, np.ones(p))
    design = design_from_gram(gram, 30)
    fit = solve(WeightedLassoProblem(design, design.predict(beta), 0.2))
    fp = sorted(set(fit.active_set) - set(S))
    clean = no_false_positive_check(fit, S)
    print("%.2f  %7.4f  %5s  %s" % (rho, rep.measure, rep.holds,
                                    fp if not clean else "none"))

# unbalanced weights can break the condition even at moderate correlation:
# making the off-support penalty cheap invites false positives
gram = example_design(s, p, 0.5)
w = np.ones(p)
w[s] = 0.3
rep = irrep_measure(gram, S, w)
print("rho=0.50 with a cheap off-support weight: measure=%.3f holds=%s"
      % (rep.measure, rep.holds))
print("sufficient norm condition: %.3f < %.3f ? %s"
      % (rep.sufficient_lhs, rep.sufficient_rhs, rep.sufficient_holds))
print("adaptive restricted regression estimate: %.4f" % rep.theta_adaptive)
