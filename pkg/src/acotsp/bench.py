"""Reproducible multi-run comparisons across instances and solvers.

Every (instance, algorithm) cell runs R times with seeds base_seed ..
base_seed+R-1, identical across algorithms, so the solvers face paired
random streams.  Cells are independent; the harness may run them in
parallel but always aggregates in (instance, algorithm, run) order.
"""

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .engine import ColonyConfig, run_as, run_eas
from .instance import generate_instance, load_instance
from .meas import MeasParams, run_meas
from .oracles import HELD_KARP_MAX_N, held_karp_exact

ALGORITHMS = {"AS": run_as, "EAS": run_eas, "MEAS": run_meas}
ALGORITHM_ORDER = ("AS", "EAS", "MEAS")

SUMMARY_HEADER = ("instance", "algorithm", "best", "mean", "std",
                  "mean_rel_err", "mean_time_s", "mean_iters_to_best")
RUNS_HEADER = ("instance", "algorithm", "seed", "best_length",
               "iters_to_best", "escapes", "time_s")

# config override keys accepted per algorithm (or under "all")
_CONFIG_KEYS = {
    "iters": ("max_iterations", int),
    "ants": ("m", int),
    "alpha": ("alpha", float),
    "beta": ("beta", float),
    "rho": ("rho", float),
    "q": ("q_deposit", float),
    "elite": ("elite_weight", float),
    "random_starts": ("random_starts", bool),
}
_MEAS_KEYS = {
    "w_plus": ("reinforce_weight", float),
    "w_minus": ("penalty_weight", float),
    "stag_window": ("stagnation_window", float),
    "escape_blend": ("escape_blend", float),
    "tol": ("improvement_tolerance", float),
    "best_scope": ("best_scope", str),
    "worst_scope": ("worst_scope", str),
}


@dataclass
class RunRecord:
    """One row of the per-run CSV."""

    instance: str
    algorithm: str
    seed: int
    best_length: float
    iters_to_best: int
    escapes: int
    time_s: float


@dataclass
class CellStats:
    """Aggregate row for one (instance, algorithm) cell."""

    instance: str
    algorithm: str
    best: float
    mean: float
    std: float
    mean_rel_err: float  # None when no optimum is known
    mean_time_s: float
    mean_iters_to_best: float
    runs: list


@dataclass
class ExperimentSpec:
    """Declarative description of a benchmark sweep.

    instances entries are TSPLIB paths or generator specs of the form
    "gen:n=30,seed=1".  overrides maps "all" or an algorithm name to
    {key: value} config overrides (keys as in _CONFIG_KEYS/_MEAS_KEYS).
    """

    instances: list
    algorithms: tuple = ALGORITHM_ORDER
    runs_per_cell: int = 10
    base_seed: int = 0
    overrides: dict = field(default_factory=dict)
    known_optima: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.runs_per_cell < 1:
            raise ValueError(f"runs_per_cell must be >= 1, got {self.runs_per_cell}")
        if not self.instances:
            raise ValueError("experiment needs at least one instance")
        algos = tuple(a.upper() for a in self.algorithms)
        for a in algos:
            if a not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r} (expected AS, EAS, MEAS)")
        if not algos:
            raise ValueError("experiment needs at least one algorithm")
        self.algorithms = algos


def resolve_instance(entry):
    """Materialize an instance list entry: generator spec or file path."""
    if isinstance(entry, str) and entry.startswith("gen:"):
        params = {}
        for item in entry[len("gen:"):].split(","):
            key, sep, value = item.partition("=")
            if not sep or key.strip() not in ("n", "seed"):
                raise ValueError(f"bad generator spec {entry!r} "
                                 "(expected gen:n=<int>,seed=<int>)")
            params[key.strip()] = int(value)
        if set(params) != {"n", "seed"}:
            raise ValueError(f"generator spec {entry!r} needs both n and seed")
        return generate_instance(params["n"], params["seed"])
    return load_instance(entry)


def _coerce(key, raw):
    if key in _CONFIG_KEYS:
        _, kind = _CONFIG_KEYS[key]
    elif key in _MEAS_KEYS:
        _, kind = _MEAS_KEYS[key]
    else:
        raise ValueError(f"unknown config key {key!r}")
    if kind is bool:
        if isinstance(raw, bool):
            return raw
        text = str(raw).strip().lower()
        if text in ("1", "true", "yes", "on"):
            return True
        if text in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"bad boolean for {key}: {raw!r}")
    return kind(raw)


def build_config(inst, algorithm, spec, seed):
    """Colony config for one cell: instance defaults, then "all" overrides,
    then algorithm-specific overrides."""
    cfg_kwargs = {}
    meas_kwargs = {}
    for scope in ("all", algorithm.lower(), algorithm.upper()):
        for key, raw in spec.overrides.get(scope, {}).items():
            value = _coerce(key, raw)
            if key in _CONFIG_KEYS:
                cfg_kwargs[_CONFIG_KEYS[key][0]] = value
            else:
                meas_kwargs[_MEAS_KEYS[key][0]] = value
    if meas_kwargs:
        cfg_kwargs["meas"] = MeasParams(**meas_kwargs)
    return ColonyConfig.for_instance(inst, seed=seed, **cfg_kwargs)


def _execute_task(task):
    inst, algorithm, cfg = task
    result = ALGORITHMS[algorithm](inst, cfg)
    return RunRecord(instance=inst.name,
                     algorithm=algorithm,
                     seed=cfg.seed,
                     best_length=result.best_tour.length,
                     iters_to_best=result.last_improvement_iter,
                     escapes=result.escapes_triggered,
                     time_s=result.wall_time_s)


def run_experiment(spec, jobs=1):
    """Run every (instance, algorithm) cell R times and aggregate.

    Returns CellStats rows in deterministic (instance, algorithm) order;
    each row keeps its per-run records for the runs CSV.
    """
    instances = [resolve_instance(e) for e in spec.instances]
    optima = dict(spec.known_optima)
    for entry, inst in zip(spec.instances, instances):
        generated = isinstance(entry, str) and entry.startswith("gen:")
        if generated and inst.name not in optima and inst.n <= HELD_KARP_MAX_N:
            optima[inst.name] = held_karp_exact(inst).length

    tasks = []
    for inst in instances:
        for algorithm in spec.algorithms:
            for r in range(spec.runs_per_cell):
                cfg = build_config(inst, algorithm, spec, spec.base_seed + r)
                tasks.append((inst, algorithm, cfg))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_execute_task, tasks))
    else:
        records = [_execute_task(t) for t in tasks]

    stats = []
    per_cell = spec.runs_per_cell
    idx = 0
    for inst in instances:
        for algorithm in spec.algorithms:
            cell_runs = records[idx:idx + per_cell]
            idx += per_cell
            lengths = np.array([r.best_length for r in cell_runs])
            optimum = optima.get(inst.name)
            if optimum is None:
                rel = None
            else:
                rel = float(np.mean(
                    [relative_error(r.best_length, optimum) for r in cell_runs]))
            stats.append(CellStats(
                instance=inst.name,
                algorithm=algorithm,
                best=float(lengths.min()),
                mean=float(lengths.mean()),
                std=float(lengths.std()),
                mean_rel_err=rel,
                mean_time_s=float(np.mean([r.time_s for r in cell_runs])),
                mean_iters_to_best=float(np.mean(
                    [r.iters_to_best for r in cell_runs])),
                runs=cell_runs))
    return stats


def relative_error(found, optimum):
    """(found - optimum) / optimum; negative results signal a corrupt
    optima table (or an oracle bug) and are raised loudly."""
    if not optimum > 0:
        raise ValueError(f"optimum must be positive, got {optimum}")
    err = (found - optimum) / optimum
    if err < 0:
        raise ValueError(
            f"found length {found} beats the recorded optimum {optimum}; "
            "the optima table or the oracle is wrong")
    return err


def flatten_runs(stats):
    """Per-run records of all cells, in cell order."""
    return [run for cell in stats for run in cell.runs]


def _num(value):
    if value is None:
        return ""
    f = float(value)
    return repr(f)


def emit_csv(stats, per_run):
    """Render the summary and per-run CSV documents.

    Numbers use repr precision (round-trip exact); rows keep the input
    order, so identical experiments yield identical documents apart from
    the time columns.
    """
    summary = io.StringIO()
    writer = csv.writer(summary, lineterminator="\n")
    writer.writerow(SUMMARY_HEADER)
    for cell in stats:
        writer.writerow([cell.instance, cell.algorithm, _num(cell.best),
                         _num(cell.mean), _num(cell.std),
                         _num(cell.mean_rel_err), _num(cell.mean_time_s),
                         _num(cell.mean_iters_to_best)])
    runs_doc = io.StringIO()
    writer = csv.writer(runs_doc, lineterminator="\n")
    writer.writerow(RUNS_HEADER)
    for run in per_run:
        writer.writerow([run.instance, run.algorithm, str(run.seed),
                         _num(run.best_length), str(run.iters_to_best),
                         str(run.escapes), _num(run.time_s)])
    return summary.getvalue(), runs_doc.getvalue()


def load_optima(text):
    """Parse a sidecar optima table: `name length` lines, '#' comments."""
    table = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"optima table line {lineno}: expected 'name length'")
        try:
            table[parts[0]] = float(parts[1])
        except ValueError:
            raise ValueError(
                f"optima table line {lineno}: bad length {parts[1]!r}") from None
    return table


def read_optima(path):
    return load_optima(Path(path).read_text())


def parse_spec_file(text, base_dir="."):
    """Parse the key=value experiment spec format.

    Keys: instance (repeatable), algorithms, runs, base_seed, optima,
    plus any config key from _CONFIG_KEYS/_MEAS_KEYS, optionally scoped
    as `<algo>.<key>` (unscoped keys apply to all algorithms).
    """
    base = Path(base_dir)
    instances = []
    algorithms = None
    runs = 10
    base_seed = 0
    optima = {}
    overrides = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"spec line {lineno}: expected key = value")
        key = key.strip()
        value = value.strip()
        if key == "instance":
            entry = value
            if not entry.startswith("gen:"):
                p = Path(entry)
                entry = str(p if p.is_absolute() else base / p)
            instances.append(entry)
        elif key == "algorithms":
            algorithms = tuple(a for a in value.replace(",", " ").split() if a)
        elif key == "runs":
            runs = int(value)
        elif key == "base_seed":
            base_seed = int(value)
        elif key == "optima":
            p = Path(value)
            optima.update(read_optima(p if p.is_absolute() else base / p))
        else:
            scope, dot, param = key.partition(".")
            if dot:
                scope, param = scope.strip().lower(), param.strip()
                if scope not in ("as", "eas", "meas", "all"):
                    raise ValueError(f"spec line {lineno}: unknown scope {scope!r}")
            else:
                scope, param = "all", key
            if param not in _CONFIG_KEYS and param not in _MEAS_KEYS:
                raise ValueError(f"spec line {lineno}: unknown key {param!r}")
            overrides.setdefault(scope, {})[param] = value
    kwargs = dict(instances=instances, runs_per_cell=runs, base_seed=base_seed,
                  overrides=overrides, known_optima=optima)
    if algorithms is not None:
        kwargs["algorithms"] = algorithms
    return ExperimentSpec(**kwargs)
