"""Command-line interface: compute, sweep, threshold, monogamy, verify.

Exit codes: 0 on success, 1 when a verification suite fails, 2 on usage or
input errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import experiments, qlin, states
from .coherence import MUB_FAMILIES
from .functionals import (DIRECTION_AB, DIRECTION_BA, NaqcOptions,
                          naqc_generalized, naqc_lower_bound, naqc_standard)

_DIRECTIONS = {"a-to-b": DIRECTION_AB, "b-to-a": DIRECTION_BA}


def _add_shared(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=7,
                        help="root seed for optimizer restarts and sampling")
    parser.add_argument("--restarts", type=int, default=24,
                        help="optimizer restarts per functional evaluation")
    parser.add_argument("--tol", type=float, default=1e-6,
                        help="optimizer stop tolerance and verdict margin")
    parser.add_argument("--mub-family", choices=MUB_FAMILIES, default="full",
                        help="coherence-triad family searched by the optimizer")
    parser.add_argument("--out", default=None,
                        help="output path (default: print to stdout)")
    parser.add_argument("--format", choices=("csv", "jsonl"), default="csv",
                        help="output table format")
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker processes for independent work items")


def _opts(args) -> NaqcOptions:
    return NaqcOptions(restarts=args.restarts, tol=args.tol,
                       mub_family=args.mub_family, seed=args.seed)


def _parse_grid(text: str) -> tuple:
    try:
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise ValueError(f"grid must look like start:stop:step, got {text!r}")
    if step <= 0:
        raise ValueError("grid step must be positive")
    n = int((stop - start) / step + 1 + 1e-9)
    return tuple(round(start + k * step, 10) for k in range(n))


def _load_state_file(path: str) -> np.ndarray:
    with open(path) as fh:
        doc = json.load(fh)
    if "matrix" in doc:
        rows = doc["matrix"]
        try:
            mat = np.array([[complex(re, im) for re, im in row] for row in rows])
        except (TypeError, ValueError):
            raise ValueError("matrix entries must be [re, im] pairs, row-major")
        rho = qlin.validate_density_matrix(mat, name=path)
    elif "family" in doc:
        spec = states.FamilySpec(doc["family"], doc.get("params", {}),
                                 int(doc.get("seed", 0)))
        out = states.sample(spec)
        rho = qlin.pure_to_density(out) if out.ndim == 1 else out
    else:
        raise ValueError("state file needs a 'matrix' or 'family' key")
    if rho.shape != (4, 4):
        raise ValueError(f"expected a two-qubit state, got dimension {rho.shape[0]}")
    return rho


def _emit(args, records, summary=None) -> None:
    text = experiments.write_records(records, args.out, args.format, summary)
    if args.out is None:
        sys.stdout.write(text)
        if summary is not None:
            sys.stderr.write(json.dumps(summary) + "\n")


def cmd_compute(args) -> int:
    opts = _opts(args)
    if args.state_file is not None:
        rho = _load_state_file(args.state_file)
        source = args.state_file
        p = None
    elif args.family is not None:
        if args.p is None:
            raise ValueError("--family needs --p")
        rho = (states.bell_mixture(args.p) if args.family == "bell-mixture"
               else states.werner(args.p))
        source = args.family
        p = args.p
    else:
        raise ValueError("compute needs --family with --p, or --state-file")
    direction = _DIRECTIONS[args.direction]
    functionals = (("standard", "generalized") if args.functional == "both"
                   else (args.functional,))
    lower = naqc_lower_bound(rho, direction)
    records = []
    for name in functionals:
        fn = naqc_standard if name == "standard" else naqc_generalized
        res = fn(rho, direction, opts)
        records.append({
            "source": source, "p": p, "functional": name,
            "direction": direction, "value": float(res.value),
            "exhibits": res.exhibits, "bound": experiments.COMPLEMENTARITY_BOUND,
            "lower_bound": float(lower),
            "restarts_agreeing": res.restarts_agreeing,
            "restarts_converged": res.restarts_converged, "seed": opts.seed,
        })
    _emit(args, records)
    return 0


def cmd_sweep(args) -> int:
    spec = experiments.SweepSpec(
        family=args.family, p_grid=_parse_grid(args.grid),
        functionals=tuple(args.functionals.split(",")), opts=_opts(args),
        direction=_DIRECTIONS[args.direction])
    records = experiments.run_sweep(spec, jobs=args.jobs)
    summary = {"command": "sweep", "family": spec.family,
               "n_points": len(spec.p_grid),
               "functionals": list(spec.functionals), "seed": args.seed}
    _emit(args, records, summary)
    return 0


def cmd_threshold(args) -> int:
    bracket = None
    if args.bracket is not None:
        lo, hi = (float(v) for v in args.bracket.split(":"))
        bracket = (lo, hi)
    p_star = experiments.find_threshold(
        args.family, args.functional, opts=_opts(args), bracket=bracket,
        direction=_DIRECTIONS[args.direction])
    records = [{"family": args.family, "functional": args.functional,
                "p_star": float(p_star),
                "bound": experiments.COMPLEMENTARITY_BOUND,
                "seed": args.seed}]
    _emit(args, records)
    return 0


def cmd_monogamy(args) -> int:
    spec = experiments.ScanSpec(
        mode=args.mode, classes=tuple(args.classes.split(",")),
        n_samples=args.n_samples, opts=_opts(args), seed=args.seed,
        functional=args.functional,
        probe="biseparable-bell" if args.probe else None)
    records, summary = experiments.run_monogamy_scan(spec, jobs=args.jobs)
    _emit(args, records, summary)
    return 0


def cmd_verify(args) -> int:
    report = experiments.run_verify(args.suite, trials=args.trials,
                                    seed=args.seed, opts=_opts(args),
                                    jobs=args.jobs)
    records = []
    for r in report.results:
        records.append({"suite": r.suite, "passed": r.passed,
                        "trials": r.trials, "violations": r.violations,
                        "worst": r.worst, "tolerance": r.tolerance,
                        "elapsed_s": round(r.elapsed, 3)})
        status = "PASS" if r.passed else "FAIL"
        sys.stderr.write(f"{status} {r.suite}: {r.violations} violation(s) "
                         f"in {r.trials} trials, worst {r.worst:.3e} "
                         f"(tol {r.tolerance:.0e})\n")
        for ex in r.counterexamples:
            sys.stderr.write(f"  counterexample: {json.dumps(ex)}\n")
    _emit(args, records)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="naqc",
        description="Nonlocal-advantage-of-quantum-coherence toolkit: "
                    "detection functionals, threshold sweeps, tripartite "
                    "monogamy scans and property verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="evaluate the functionals for one state")
    _add_shared(p)
    p.add_argument("--family", choices=("bell-mixture", "werner"))
    p.add_argument("--p", type=float, help="mixing parameter for --family")
    p.add_argument("--state-file", help="JSON state file (matrix or family)")
    p.add_argument("--functional", choices=("standard", "generalized", "both"),
                   default="both")
    p.add_argument("--direction", choices=tuple(_DIRECTIONS), default="a-to-b")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sweep", help="evaluate the functionals on a p grid")
    _add_shared(p)
    p.add_argument("--family", choices=experiments.SWEEP_FAMILIES, required=True)
    p.add_argument("--grid", default="0:1:0.01", help="start:stop:step")
    p.add_argument("--functionals", default="standard,generalized")
    p.add_argument("--direction", choices=tuple(_DIRECTIONS), default="a-to-b")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("threshold", help="bisect the detection threshold in p")
    _add_shared(p)
    p.add_argument("--family", choices=experiments.SWEEP_FAMILIES, required=True)
    p.add_argument("--functional", choices=("standard", "generalized"),
                   required=True)
    p.add_argument("--bracket", help="lo:hi bracket (default per family)")
    p.add_argument("--direction", choices=tuple(_DIRECTIONS), default="a-to-b")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("monogamy", help="scan three-qubit monogamy sums")
    _add_shared(p)
    p.add_argument("--mode", choices=(experiments.MODE_FIXED_COHERENCE,
                                      experiments.MODE_FIXED_MEASUREMENT),
                   required=True)
    p.add_argument("--classes", default="ghz-class,w-class")
    p.add_argument("--n-samples", type=int, default=100)
    p.add_argument("--functional", choices=("standard", "generalized"),
                   default="generalized")
    p.add_argument("--probe", action="store_true",
                   help="append the biseparable Bell (x) pure probe record")
    p.set_defaults(func=cmd_monogamy)

    p = sub.add_parser("verify", help="run property-verification suites")
    _add_shared(p)
    p.add_argument("--suite", default="all",
                   choices=("all",) + experiments.VERIFY_SUITES)
    p.add_argument("--trials", type=int, default=None,
                   help="override the per-suite default trial count")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
