"""Command-line entry point.

Each invocation writes exactly one JSON document to stdout; diagnostics go
to stderr.  Exit codes: 0 success, 2 configuration/usage error, 3 numerical
failure (a non-converged solve is reported as success with a warning unless
--strict is given).  The environment variable SPARSE2STAGE_SEED overrides
any seed found in a scenario config.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import eigen, harness, irrepresentable, oracle
from .errors import Sparse2StageError
from .linalg import load_design_csv, normalize_columns
from .solver import WeightedLassoProblem, solve
from .twostage import adaptive_lasso, threshold_refit

SCHEMA_VERSION = harness.SCHEMA_VERSION

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _log(msg):
    print(msg, file=sys.stderr)


def _emit(doc, out_path=None):
    doc = {"schema_version": SCHEMA_VERSION, **doc}
    text = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    print(text)


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return [float(v) for v in obj.ravel()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _load_design(args):
    raw = load_design_csv(args.design, header=args.header)
    return normalize_columns(raw)


def _load_response(args):
    y = load_design_csv(args.response, header=args.header)
    return y.ravel()


def _parse_weights(spec, p):
    if spec is None or spec == "ones":
        return None
    vals = [float(v) for v in spec.split(",")]
    if len(vals) != p:
        raise ValueError(f"expected {p} weights, got {len(vals)}")
    return np.asarray(vals)


def _fit_result_doc(fit):
    return {
        "beta": _jsonable(fit.beta),
        "active_set": list(fit.active_set),
        "objective": float(fit.objective),
        "kkt": {"max_violation": float(fit.kkt.max_violation)},
        "iterations": int(fit.iterations),
        "converged": bool(fit.converged),
    }


def _scenario_config(args):
    with open(args.scenario) as fh:
        cfg = json.load(fh)
    env_seed = os.environ.get("SPARSE2STAGE_SEED")
    if env_seed is not None:
        cfg["seed"] = int(env_seed)
    if args.replications is not None:
        cfg["replications"] = int(args.replications)
    return cfg


def cmd_solve(args):
    design = _load_design(args)
    y = _load_response(args)
    problem = WeightedLassoProblem(
        design, y, args.lambda_init, args.lambda_weight,
        _parse_weights(args.weights, design.p))
    fit = solve(problem, tol=args.tol, max_iter=args.max_iter)
    doc = _fit_result_doc(fit)
    if not fit.converged:
        doc["warning"] = "not converged"
        if args.strict:
            _emit(doc, args.out)
            return EXIT_NUMERIC
    _emit(doc, args.out)
    return EXIT_OK


def cmd_two_stage(args):
    design = _load_design(args)
    y = _load_response(args)
    init = solve(WeightedLassoProblem(design, y, args.lambda_init),
                 tol=args.tol, max_iter=args.max_iter)
    doc = {"initial": _fit_result_doc(init)}
    code = EXIT_OK
    if args.method == "adaptive":
        res = adaptive_lasso(design, y, args.lambda_init, args.lambda_adap,
                             tol=args.tol, max_iter=args.max_iter,
                             initial=init)
        doc["adaptive"] = _fit_result_doc(res.final_fit)
        if args.strict and not res.final_fit.converged:
            code = EXIT_NUMERIC
    else:
        res = threshold_refit(design, y, init, args.delta)
        doc["threshold"] = {
            "beta": _jsonable(res.final_beta),
            "active_set": list(res.final_active),
            "delta": res.threshold,
        }
    doc["method"] = args.method
    _emit(doc, args.out)
    return code


def cmd_eigen(args):
    design = _load_design(args)
    S0 = [int(v) for v in args.subset.split(",")]
    report = eigen.build_eigen_report(design.gram, S0)
    doc = {
        "lambda_max": report.lambda_max,
        "lambda_max_S": report.lambda_max_S,
        "lambda_min_S": report.lambda_min_S,
        "lambda_sparse": {str(k): v for k, v in report.lambda_sparse.items()},
        "phi_sparse_sq": {str(k): v
                          for k, v in report.phi_sparse_sq.items()},
        "phi_sq": {f"L{L}_N{N}": v for (L, N), v in report.phi_sq.items()},
        "phi_min_sq": {f"L{L}_N{N}": v
                       for (L, N), v in report.phi_min_sq.items()},
        "certified_lower_sq": report.certified_lower_sq,
        "method": report.method,
    }
    _emit(_jsonable(doc), args.out)
    return EXIT_OK


def cmd_oracle(args):
    design = _load_design(args)
    f0 = load_design_csv(args.f0, header=args.header).ravel()
    S_true = [int(v) for v in args.s_true.split(",")]
    sol = oracle.oracle_search(design, f0, S_true, args.lambda_init,
                               mode=args.mode)
    doc = {
        "S0": list(sol.S0),
        "b0": _jsonable(sol.b0),
        "s0": sol.s0,
        "criterion_value": sol.criterion_value,
        "mode": sol.mode,
    }
    _emit(doc, args.out)
    return EXIT_OK


def cmd_irrep(args):
    design = _load_design(args)
    S = [int(v) for v in args.subset.split(",")]
    w = _parse_weights(args.weights, design.p)
    if w is None:
        w = np.ones(design.p)
    rep = irrepresentable.irrep_measure(design.gram, S, w)
    doc = {
        "measure": rep.measure,
        "holds": rep.holds,
        "sufficient_lhs": rep.sufficient_lhs,
        "sufficient_rhs": rep.sufficient_rhs,
        "sufficient_holds": rep.sufficient_holds,
        "theta_adaptive": rep.theta_adaptive,
    }
    _emit(_jsonable(doc), args.out)
    return EXIT_OK


def cmd_simulate(args):
    cfg = _scenario_config(args)
    reps = int(cfg.pop("replications", args.replications or 50))
    tuning = cfg.pop("tuning", None)
    scenario = harness.generate(cfg)
    _log(f"scenario {scenario.name}: preparing oracle and eigen constants")
    ctx = harness.prepare(scenario, tuning=tuning)
    outcomes = harness.simulate(ctx, reps)
    if args.metrics_csv:
        harness.write_metrics_csv(args.metrics_csv,
                                  {scenario.name: (ctx, outcomes)})
    doc = {
        "scenario": scenario.name,
        "lambda_init": ctx.lambda_init,
        "replications": reps,
        "event_T_count": sum(o.event_T for o in outcomes),
        "metrics": [
            {"rep": o.rep, "event_T": o.event_T,
             "metrics": _jsonable(o.metrics), "errors": o.errors}
            for o in outcomes
        ],
    }
    _emit(doc, args.out)
    return EXIT_OK


def cmd_verify_bounds(args):
    cfg = _scenario_config(args)
    reps = int(cfg.pop("replications", args.replications or 50))
    tuning = cfg.pop("tuning", None)
    scenario = harness.generate(cfg)
    _log(f"scenario {scenario.name}: preparing oracle and eigen constants")
    ctx = harness.prepare(scenario, tuning=tuning)
    outcomes = harness.simulate(ctx, reps)
    reports = [harness.context_verify(ctx, o) for o in outcomes]
    summary = harness.summarize(reports)
    text = harness.reports_to_json(reports, summary)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    asserted = sum(r["asserted"] for r in summary.values())
    violations = sum(r["violations"] for r in summary.values())
    _log(f"{len(reports)} replications, {asserted} asserted records, "
         f"{violations} violations")
    return EXIT_OK if violations == 0 else EXIT_NUMERIC


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sparse2stage",
        description="Sparse two-stage regression toolkit")
    parser.add_argument("--threads", type=int, default=os.cpu_count(),
                        help="worker threads (single-process; reserved)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, response=True):
        p.add_argument("--design", required=True, help="design CSV")
        if response:
            p.add_argument("--response", required=True, help="response CSV")
        p.add_argument("--header", action="store_true",
                       help="skip one CSV header line")
        p.add_argument("--out", help="also write the JSON document here")

    p = sub.add_parser("solve", help="weighted Lasso fit")
    add_io(p)
    p.add_argument("--lambda-init", type=float, required=True,
                   dest="lambda_init")
    p.add_argument("--lambda-weight", type=float, default=1.0,
                   dest="lambda_weight")
    p.add_argument("--weights", default="ones",
                   help='comma-separated weights or "ones"')
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=100_000, dest="max_iter")
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("two-stage", help="adaptive or thresholded Lasso")
    add_io(p)
    p.add_argument("--method", choices=("adaptive", "threshold"),
                   required=True)
    p.add_argument("--lambda-init", type=float, required=True,
                   dest="lambda_init")
    p.add_argument("--lambda-adap", type=float, default=1.0,
                   dest="lambda_adap")
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=100_000, dest="max_iter")
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_two_stage)

    p = sub.add_parser("eigen", help="spectral audit of a design")
    add_io(p, response=False)
    p.add_argument("--subset", required=True,
                   help="comma-separated oracle-set indices")
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("oracle", help="oracle set search")
    add_io(p, response=False)
    p.add_argument("--f0", required=True, help="regression function CSV")
    p.add_argument("--s-true", required=True, dest="s_true",
                   help="comma-separated true-support indices")
    p.add_argument("--lambda-init", type=float, required=True,
                   dest="lambda_init")
    p.add_argument("--mode", choices=("noisy", "noiseless"), default="noisy")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("irrep", help="irrepresentable-condition check")
    add_io(p, response=False)
    p.add_argument("--subset", required=True)
    p.add_argument("--weights", default="ones")
    p.set_defaults(func=cmd_irrep)

    p = sub.add_parser("simulate", help="run replications of a scenario")
    p.add_argument("--scenario", required=True, help="scenario JSON config")
    p.add_argument("--replications", type=int)
    p.add_argument("--metrics-csv", dest="metrics_csv",
                   help="write per-replication metric rows here")
    p.add_argument("--out", help="also write the JSON document here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify-bounds",
                       help="evaluate every inequality record")
    p.add_argument("--scenario", required=True, help="scenario JSON config")
    p.add_argument("--replications", type=int)
    p.add_argument("--out", help="also write the JSON report here")
    p.set_defaults(func=cmd_verify_bounds)

    return parser


def dispatch(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (Sparse2StageError, ValueError, OSError,
            json.JSONDecodeError) as exc:
        _log(f"error: {exc}")
        return EXIT_CONFIG
    except ArithmeticError as exc:
        _log(f"numerical failure: {exc}")
        return EXIT_NUMERIC


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
