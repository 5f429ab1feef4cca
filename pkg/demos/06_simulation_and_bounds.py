"""Simulation harness demo.

Generates a scenario, runs noise replications, and checks every
finite-sample inequality record the estimators carry.  Records are only
asserted on replications where the noise-correlation event holds and the
bounds' hypotheses are met; the summary counts both.
"""

from sparse2stage import harness

config = {
    "family": "equicorrelated", "rho": 0.3, "n": 80, "p": 16, "s_true": 3,
    "sigma": 0.5, "t": 2.0, "seed": 7, "beta": {"magnitude": 4.0},
}

scenario = harness.generate(config)
print("scenario:", scenario.name)
context = harness.prepare(scenario)
print("  lambda_init = %.4f" % context.lambda_init)
print("  oracle set  =", context.oracle_solution.S0)
print("  delta_oracle^2 = %.4f" % context.scalars.delta_oracle_sq)
print("  threshold delta = %.4f, adaptive level = %.4f"
      % (context.delta, context.lambda_adap))

outcomes = harness.simulate(context, 25)
on_T = sum(o.event_T for o in outcomes)
print("  %d/%d replications on the noise event" % (on_T, len(outcomes)))

reports = [harness.context_verify(context, o) for o in outcomes]
summary = harness.summarize(reports)
print("inequality records (asserted = on-event with hypotheses met):")
for name, row in summary.items():
    print("  %-28s total=%3d asserted=%3d violations=%d"
          % (name, row["total"], row["asserted"], row["violations"]))

assert all(row["violations"] == 0 for row in summary.values())
print("all asserted records hold")

# per-replication error metrics are also collected, e.g. the first one:
m = outcomes[0].metrics["init"]
print("replication 0 initial fit: pred=%.4f l2 error=%.4f false positives=%d"
      % (m["pred"], m["l2_b0"], m["fp_S0"]))
