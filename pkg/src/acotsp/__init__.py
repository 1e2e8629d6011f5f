"""Ant-colony TSP solvers: the classic every-ant-deposit system, the
elite variant, and a global-update-only elite variant with worst-tour
penalization and a stagnation escape.  Ships exact small-instance
oracles, a TSPLIB-subset parser, and a reproducible benchmark harness.
"""

from .bench import (CellStats, ExperimentSpec, RunRecord, emit_csv,
                    flatten_runs, load_optima, read_optima, relative_error,
                    run_experiment)
from .engine import (AntState, ColonyConfig, RunResult, construct_tour,
                     run_as, run_eas, select_next, transition_probabilities,
                     visibility)
from .instance import (EUC_2D, EXPLICIT_FULL_MATRIX, Instance, Tour,
                       TsplibParseError, data_path, distance,
                       generate_instance, load_instance, make_tour,
                       nearest_neighbor_tour, parse_tsplib, tour_length,
                       write_instance)
from .meas import (MeasParams, StagnationMonitor, detect_stagnation, escape,
                   global_update_meas, run_meas)
from .oracles import brute_force_optimum, held_karp_exact
from .pheromone import (PheromoneMatrix, UpdateCounters, deposit_as,
                        deposit_elite, evaporate, init_pheromone)

__version__ = "0.1.0"

__all__ = [
    "AntState", "CellStats", "ColonyConfig", "EUC_2D",
    "EXPLICIT_FULL_MATRIX", "ExperimentSpec", "Instance", "MeasParams",
    "PheromoneMatrix", "RunRecord", "RunResult", "StagnationMonitor",
    "Tour", "TsplibParseError", "UpdateCounters", "brute_force_optimum",
    "construct_tour", "data_path", "deposit_as", "deposit_elite",
    "detect_stagnation", "distance", "emit_csv", "escape", "evaporate",
    "flatten_runs", "generate_instance", "global_update_meas",
    "held_karp_exact", "init_pheromone", "load_instance", "load_optima",
    "make_tour", "nearest_neighbor_tour", "parse_tsplib", "read_optima",
    "relative_error", "run_as", "run_eas", "run_experiment", "run_meas",
    "select_next", "tour_length", "transition_probabilities", "visibility",
    "write_instance",
]
