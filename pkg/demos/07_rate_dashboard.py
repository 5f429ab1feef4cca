"""Rate dashboard demo.

Sweeps the sample size and divides the measured estimation errors by their
theoretical rate brackets (lambda^2 s0 for prediction, lambda s0 for l1,
lambda sqrt(s0) for l2).  Roughly flat ratio curves indicate the rates are
the right brackets; the ratios are reported, never asserted.
"""

import numpy as np

from sparse2stage import harness

entries = []
for n in (50, 100, 200, 400):
    config = {"family": "gaussian", "n": n, "p": 30, "s_true": 3,
              "sigma": 0.5, "t": 2.0, "seed": 13,
              "beta": {"magnitude": 4.0}}
    context = harness.prepare(harness.generate(config))
    outcomes = harness.simulate(context, 15)
    # average metrics over the on-event replications
    kept = [o for o in outcomes if o.event_T] or outcomes
    avg = {}
    for method in ("init", "adaptive", "threshold"):
        avg[method] = {
            k: float(np.mean([o.metrics[method][k] for o in kept]))
            for k in harness.METRIC_COLUMNS}
    entries.append({"x": n, "lambda_init": context.lambda_init,
                    "s0": context.oracle_solution.s0, "metrics": avg})
    print("n=%3d lambda=%.3f s0=%d (%d on-event replications)"
          % (n, context.lambda_init, context.oracle_solution.s0, len(kept)))

table = harness.big_O_dashboard(entries)
print("\nmeasured error / rate bracket (rows: n sweep)")
for method, ratios in table["ratios"].items():
    print(method)
    for key, vals in ratios.items():
        print("  %-6s " % key + "  ".join("%7.3f" % v for v in vals))
