"""Command-line front-end: solve, bench, exact, gen.

Exit codes: 0 success, 1 usage error (bad flags, guard violations),
2 runtime/data error (unreadable or malformed files).
"""

import argparse
import json
import sys
from pathlib import Path

from .bench import (ExperimentSpec, emit_csv, flatten_runs,
                    parse_spec_file, read_optima, run_experiment)
from .engine import ColonyConfig, run_as, run_eas
from .instance import (TsplibParseError, data_path, generate_instance,
                       load_instance, write_instance)
from .meas import MeasParams, run_meas
from .oracles import (BRUTE_FORCE_MAX_N, HELD_KARP_MAX_N,
                      brute_force_optimum, held_karp_exact)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

_RUNNERS = {"as": run_as, "eas": run_eas, "meas": run_meas}

# flags that only make sense for specific algorithms
_ELITE_ALGOS = ("eas", "meas")   # meas reuses the elite weight as its default gain
_MEAS_FLAGS = ("w_plus", "w_minus", "stag_window", "escape_blend")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse with the documented exit code for usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_config_flags(p, include_algo_specific=True):
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--iters", type=int, default=None,
                   help="iteration budget (default 1000)")
    p.add_argument("--ants", type=int, default=None,
                   help="ants per iteration (default min(n, 50))")
    p.add_argument("--alpha", type=float, default=None,
                   help="trail exponent (default 1)")
    p.add_argument("--beta", type=float, default=None,
                   help="visibility exponent (default 3)")
    p.add_argument("--rho", type=float, default=None,
                   help="evaporation rate (default 0.1)")
    p.add_argument("--q", type=float, default=None,
                   help="deposit constant (default 1)")
    p.add_argument("--random-starts", action="store_true",
                   help="random start nodes instead of round-robin (default off)")
    if include_algo_specific:
        p.add_argument("--elite", type=float, default=None,
                       help="elite deposit weight (default ceil(n/4); eas/meas only)")
        p.add_argument("--w-plus", type=float, default=None,
                       help="best-tour gain weight (default: elite weight; meas only)")
        p.add_argument("--w-minus", type=float, default=None,
                       help="worst-tour penalty fraction (default 0.2; meas only)")
        p.add_argument("--stag-window", type=float, default=None,
                       help="iterations without improvement before an escape "
                            "(default 30; inf disables; meas only)")
        p.add_argument("--escape-blend", type=float, default=None,
                       help="escape blend toward the initial trail "
                            "(default 0.5; meas only)")


def build_parser():
    parser = _Parser(prog="acotsp",
                     description="Ant-colony TSP solvers and benchmark harness")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one instance",
                             description="Solve a TSPLIB instance and report "
                                         "the best tour found.")
    p_solve.add_argument("instance", help="TSPLIB file to solve")
    p_solve.add_argument("--algo", choices=("as", "eas", "meas"), default="meas",
                         help="solver variant (default meas)")
    _add_config_flags(p_solve)
    p_solve.add_argument("--json", action="store_true",
                         help="emit one machine-readable JSON line (default off)")
    p_solve.set_defaults(func=cmd_solve)

    p_bench = sub.add_parser("bench", help="run a benchmark sweep",
                             description="Run seeded multi-run comparisons and "
                                         "write summary.csv / runs.csv.")
    p_bench.add_argument("--spec", default=None,
                         help="experiment spec file (key = value lines)")
    p_bench.add_argument("--instance", action="append", default=None,
                         help="TSPLIB path or gen:n=<int>,seed=<int> (repeatable)")
    p_bench.add_argument("--algos", default="as,eas,meas",
                         help="comma-separated algorithms (default as,eas,meas)")
    p_bench.add_argument("--runs", type=int, default=10,
                         help="runs per (instance, algorithm) cell (default 10)")
    p_bench.add_argument("--base-seed", type=int, default=0,
                         help="first run seed; run r uses base+r (default 0)")
    p_bench.add_argument("--optima", default=str(data_path("optima.txt")),
                         help="best-known lengths sidecar "
                              "(default: bundled registry)")
    p_bench.add_argument("--out", default="bench_out",
                         help="output directory (default bench_out)")
    p_bench.add_argument("--jobs", type=int, default=1,
                         help="parallel worker processes (default 1)")
    _add_config_flags(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    p_exact = sub.add_parser("exact", help="exact optimum of a small instance",
                             description="Print the exact optimum (n <= 18); "
                                         "n <= 11 also cross-checks brute force.")
    p_exact.add_argument("instance", help="TSPLIB file")
    p_exact.set_defaults(func=cmd_exact)

    p_gen = sub.add_parser("gen", help="generate a random instance",
                           description="Write a seeded random EUC_2D instance "
                                       "(integer grid on [0, 1000]^2).")
    p_gen.add_argument("--n", type=int, required=True, help="node count (>= 2)")
    p_gen.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p_gen.add_argument("--out", required=True, help="output file path")
    p_gen.set_defaults(func=cmd_gen)

    return parser


def _load(path):
    try:
        return load_instance(path)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    except TsplibParseError as exc:
        raise DataError(f"{path}: {exc}") from exc


class DataError(Exception):
    pass


def _solve_config(inst, args):
    if args.algo != "meas":
        for flag in _MEAS_FLAGS:
            if getattr(args, flag) is not None:
                raise UsageError(
                    f"--{flag.replace('_', '-')} requires --algo meas")
    if args.algo not in _ELITE_ALGOS and args.elite is not None:
        raise UsageError(f"--elite is not used by --algo {args.algo}")
    overrides = {}
    for flag, key in (("iters", "max_iterations"), ("ants", "m"),
                      ("alpha", "alpha"), ("beta", "beta"), ("rho", "rho"),
                      ("q", "q_deposit"), ("elite", "elite_weight")):
        value = getattr(args, flag)
        if value is not None:
            overrides[key] = value
    if args.random_starts:
        overrides["random_starts"] = True
    meas_overrides = {}
    for flag, key in (("w_plus", "reinforce_weight"),
                      ("w_minus", "penalty_weight"),
                      ("stag_window", "stagnation_window"),
                      ("escape_blend", "escape_blend")):
        value = getattr(args, flag)
        if value is not None:
            meas_overrides[key] = value
    try:
        if meas_overrides:
            overrides["meas"] = MeasParams(**meas_overrides)
        return ColonyConfig.for_instance(inst, seed=args.seed, **overrides)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_solve(args):
    inst = _load(args.instance)
    cfg = _solve_config(inst, args)
    result = _RUNNERS[args.algo](inst, cfg)
    record = {
        "length": result.best_tour.length,
        "tour": result.best_tour.order.tolist(),
        "iters_to_best": result.last_improvement_iter,
        "escapes": result.escapes_triggered,
    }
    if args.json:
        print(json.dumps(record, separators=(",", ":")))
    else:
        print(f"length {_fmt(record['length'])}")
        print("tour " + " ".join(str(v) for v in record["tour"]))
        print(f"iters_to_best {record['iters_to_best']}")
        print(f"escapes {record['escapes']}")
    return EXIT_OK


def _fmt(x):
    f = float(x)
    return str(int(f)) if f.is_integer() else repr(f)


def cmd_exact(args):
    inst = _load(args.instance)
    if inst.n > HELD_KARP_MAX_N:
        raise UsageError(
            f"exact solving is limited to n <= {HELD_KARP_MAX_N}, got n={inst.n}")
    tour = held_karp_exact(inst)
    print(f"optimum {_fmt(tour.length)}")
    print("tour " + " ".join(str(v) for v in tour.order.tolist()))
    if inst.n <= BRUTE_FORCE_MAX_N:
        bf = brute_force_optimum(inst)
        if bf.length != tour.length:
            raise DataError(
                f"oracle disagreement: brute force {bf.length} vs "
                f"dynamic program {tour.length}")
        print(f"cross-check brute-force agrees (length {_fmt(bf.length)})")
    return EXIT_OK


def cmd_gen(args):
    try:
        inst = generate_instance(args.n, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    try:
        write_instance(inst, args.out)
    except OSError as exc:
        raise DataError(f"cannot write {args.out}: {exc}") from exc
    print(f"wrote {inst.name} (n={inst.n}) to {args.out}")
    return EXIT_OK


def _bench_spec(args):
    if args.spec is not None:
        try:
            text = Path(args.spec).read_text()
        except OSError as exc:
            raise DataError(f"cannot read {args.spec}: {exc}") from exc
        try:
            return parse_spec_file(text, base_dir=Path(args.spec).parent)
        except (ValueError, OSError) as exc:
            raise DataError(f"{args.spec}: {exc}") from exc
    if not args.instance:
        raise UsageError("bench needs --spec or at least one --instance")
    algorithms = tuple(a for a in args.algos.replace(",", " ").split() if a)
    overrides = {"all": {}}
    for flag in ("iters", "ants", "alpha", "beta", "rho", "q", "elite",
                 "w_plus", "w_minus", "stag_window", "escape_blend"):
        value = getattr(args, flag)
        if value is not None:
            overrides["all"][flag] = value
    if args.random_starts:
        overrides["all"]["random_starts"] = True
    try:
        optima = read_optima(args.optima)
    except OSError as exc:
        raise DataError(f"cannot read optima table {args.optima}: {exc}") from exc
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    try:
        return ExperimentSpec(instances=list(args.instance),
                              algorithms=algorithms,
                              runs_per_cell=args.runs,
                              base_seed=args.base_seed,
                              overrides=overrides,
                              known_optima=optima)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_bench(args):
    spec = _bench_spec(args)
    if args.jobs < 1:
        raise UsageError(f"--jobs must be >= 1, got {args.jobs}")
    try:
        stats = run_experiment(spec, jobs=args.jobs)
    except (OSError, TsplibParseError, ValueError) as exc:
        raise DataError(str(exc)) from exc
    summary_csv, runs_csv = emit_csv(stats, flatten_runs(stats))
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "summary.csv").write_text(summary_csv)
        (out / "runs.csv").write_text(runs_csv)
    except OSError as exc:
        raise DataError(f"cannot write results to {out}: {exc}") from exc
    _print_summary_table(stats)
    print(f"wrote {out / 'summary.csv'} and {out / 'runs.csv'}")
    return EXIT_OK


def _print_summary_table(stats):
    headers = ("instance", "algorithm", "best", "mean", "std", "mean_rel_err")
    rows = [headers]
    for cell in stats:
        rel = "-" if cell.mean_rel_err is None else f"{cell.mean_rel_err:.4f}"
        rows.append((cell.instance, cell.algorithm, _fmt(cell.best),
                     f"{cell.mean:.2f}", f"{cell.std:.2f}", rel))
    widths = [max(len(r[c]) for r in rows) for c in range(len(headers))]
    for row in rows:
        print("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles --help (0) and usage errors (1)
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"acotsp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"acotsp: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
