"""Command line interface: ``permsample {bounds,sample,estimate,exact,gen}``."""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

from . import __version__
from .bounds import bregman_bound, huber_bound, predict_runtime, shared_g_table, vdw_lower_bound_nearly_regular
from .estimator import MODES, TARGET_ACCEPTS, AccuracyParams, chernoff_target_accepts, estimate_permanent, format_log_value
from .gen import NEARLY_REGULAR, REGULAR_UNION, GenSpec, generate
from .instance import InfeasibleInstanceError, Instance, MatrixFormatError, check_feasible, read_matrix, write_matrix
from .oracle import MAX_EXACT_N, exact_permanent
from .sampler import BudgetExhausted, sample_many
from .streams import resolve_seed

SCHEMA_VERSION = "1.0"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_BUDGET = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _log_number(x: float):
    """JSON has no infinities; those are written as strings."""
    if math.isfinite(x):
        return x
    return "-inf" if x < 0 else "inf"


def _bounds_results(inst: Instance) -> dict:
    table = shared_g_table(inst.n)
    bregman = bregman_bound(inst).log_value
    upper = huber_bound(inst, table).log_value
    lower = vdw_lower_bound_nearly_regular(inst).log_value
    out = {
        "n": inst.n,
        "edges": int(inst.row_sums.sum()),
        "bregman_log": _log_number(bregman),
        "bregman": format_log_value(bregman),
        "huber_log": _log_number(upper),
        "huber": format_log_value(upper),
        "vdw_nearly_regular_log": _log_number(lower),
        "vdw_nearly_regular": format_log_value(lower),
    }
    if inst.min_degree >= 1:
        pred = predict_runtime(inst, table)
        out.update(
            log_acceptance_lower=_log_number(pred.log_acceptance_lower),
            expected_trials_upper=format_log_value(-pred.log_acceptance_lower),
            delta_min=pred.delta_min,
            gamma=pred.gamma,
        )
    else:
        out.update(log_acceptance_lower="-inf", expected_trials_upper="inf", delta_min=0, gamma=0.0)
    return out


def _report(command, inputs, results, seed, started, timing=True) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "results": results,
        "seed": seed,
        "wall_time_ms": round((time.perf_counter() - started) * 1000.0, 3) if timing else None,
    }


def _emit(report, stream=None):
    stream = stream or sys.stdout
    stream.write(json.dumps(report, sort_keys=False) + "\n")
    stream.flush()


def _load(path) -> Instance:
    try:
        return read_matrix(path)
    except MatrixFormatError as exc:
        raise MatrixFormatError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise MatrixFormatError(f"{path}: {exc.strerror or exc}") from exc


def cmd_bounds(args, started):
    inst = _load(args.path)
    _emit(_report("bounds", {"path": args.path}, _bounds_results(inst), None, started, not args.no_timing))
    return EXIT_OK


def cmd_sample(args, started):
    inst = _load(args.path)
    check_feasible(inst)
    seed = resolve_seed(args.seed)
    inputs = {"path": args.path, "count": args.count, "max_trials": args.max_trials, "workers": args.workers}
    status, code = "ok", EXIT_OK
    try:
        reports = sample_many(inst, args.count, seed=seed, max_trials=args.max_trials, workers=args.workers)
        spent = 0
    except BudgetExhausted as exc:
        reports, spent = exc.reports, exc.trials
        status, code = "budget_exhausted", EXIT_BUDGET
    lines = [r.matching.to_line() for r in reports]
    trials = [r.trials for r in reports]
    total = sum(trials) + spent
    results = {
        "status": status,
        "samples": len(reports),
        "trials": trials,
        "total_trials": total,
        "acceptance_rate": len(reports) / total if total else 0.0,
        "huber_log": _log_number(huber_bound(inst).log_value),
    }
    if args.format == "json":
        results["matchings"] = lines
        _emit(_report("sample", inputs, results, seed, started, not args.no_timing))
    else:
        if lines:
            sys.stdout.write("\n".join(lines) + "\n")
            sys.stdout.flush()
        _emit(_report("sample", inputs, results, seed, started, not args.no_timing), sys.stderr)
    if code == EXIT_BUDGET:
        print(f"error: budget of {args.max_trials} trials exhausted", file=sys.stderr)
    return code


def cmd_estimate(args, started):
    try:
        params = AccuracyParams(args.sigma, args.delta)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.mode != TARGET_ACCEPTS and args.trials is None:
        raise UsageError("--mode fixed-trials needs --trials")
    inst = _load(args.path)
    check_feasible(inst)
    seed = resolve_seed(args.seed)
    ledger = estimate_permanent(inst, params, seed=seed, mode=args.mode, trials=args.trials, workers=args.workers)
    results = {
        "mode": ledger.mode,
        "trials": ledger.trials,
        "accepts": ledger.accepts,
        "target_accepts": chernoff_target_accepts(params) if ledger.mode == TARGET_ACCEPTS else None,
        "log_m_tilde": _log_number(ledger.log_m_tilde),
        "log_estimate": _log_number(ledger.log_estimate),
        "estimate": ledger.estimate_decimal,
        "zero_accepts": ledger.accepts == 0,
    }
    inputs = {"path": args.path, "sigma": args.sigma, "delta": args.delta, "mode": args.mode, "trials": args.trials, "workers": args.workers}
    _emit(_report("estimate", inputs, results, seed, started, not args.no_timing))
    return EXIT_OK


def cmd_exact(args, started):
    inst = _load(args.path)
    if inst.n > MAX_EXACT_N:
        raise UsageError(f"exact counting is limited to n <= {MAX_EXACT_N}; use `permsample estimate` for n={inst.n}")
    value = exact_permanent(inst)
    _emit(_report("exact", {"path": args.path}, {"n": inst.n, "permanent": str(value)}, None, started, not args.no_timing))
    return EXIT_OK


def cmd_gen(args, started):
    seed = resolve_seed(args.seed)
    try:
        spec = GenSpec(args.n, args.degree, args.jitter, args.model, seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    inst = generate(spec)
    write_matrix(inst, args.out)
    inputs = {"n": args.n, "degree": args.degree, "jitter": args.jitter, "model": args.model, "out": args.out}
    _emit(_report("gen", inputs, _bounds_results(inst), seed, started, not args.no_timing))
    return EXIT_OK


def _seed(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be non-negative")
    return value


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="permsample", description="Exact uniform perfect matchings and permanent estimates.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    timing = argparse.ArgumentParser(add_help=False)
    timing.add_argument("--no-timing", action="store_true", help="write wall_time_ms as null so reports are byte-stable")

    p = sub.add_parser("bounds", parents=[timing], help="upper/lower permanent bounds and runtime prediction")
    p.add_argument("path")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sample", parents=[timing], help="draw uniform perfect matchings")
    p.add_argument("path")
    p.add_argument("--count", "-k", type=_positive, default=1)
    p.add_argument("--seed", type=_seed)
    p.add_argument("--max-trials", type=_positive)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--format", choices=("lines", "json"), default="lines")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("estimate", parents=[timing], help="estimate the permanent")
    p.add_argument("path")
    p.add_argument("--sigma", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--seed", type=_seed)
    p.add_argument("--mode", choices=MODES, default=TARGET_ACCEPTS)
    p.add_argument("--trials", type=_positive)
    p.add_argument("--workers", type=_positive, default=1)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("exact", parents=[timing], help=f"exact permanent (n <= {MAX_EXACT_N})")
    p.add_argument("path")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("gen", parents=[timing], help="write a random regular or nearly regular instance")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--degree", type=_positive, required=True)
    p.add_argument("--jitter", type=int, default=0)
    p.add_argument("--model", choices=(REGULAR_UNION, NEARLY_REGULAR), default=REGULAR_UNION)
    p.add_argument("--seed", type=_seed)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    started = time.perf_counter()
    try:
        return args.func(args, started)
    except UsageError as exc:
        print(f"permsample {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MatrixFormatError as exc:
        print(f"permsample {args.command}: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InfeasibleInstanceError as exc:
        print(f"permsample {args.command}: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
