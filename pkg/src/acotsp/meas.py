"""Elite-variant solver with a global-only trail update.

No per-ant deposits happen here: each iteration applies exactly one
reinforcement (best tour) and one penalization (worst tour), and a
stagnation monitor triggers a trail smoothing that restores exploration
without discarding the learned ranking.
"""

import math
from dataclasses import dataclass

from .engine import run_colony
from .pheromone import add_on_tour_edges, apply_floor, tour_edges


@dataclass
class MeasParams:
    """Knobs of the global-only update and the stagnation escape.

    reinforce_weight   multiplier on q / L_best for best-tour edges
                       (None: reuse the colony's elite weight)
    penalty_weight     fractional trail reduction on worst-tour edges,
                       in [0, 1) so trails stay positive before flooring
    stagnation_window  consecutive non-improving iterations that trigger
                       an escape; math.inf disables escapes
    improvement_tolerance  relative improvement at or below this counts
                       as no improvement
    escape_blend       blend factor toward the initial trail level
                       (1.0 is a full reset)
    best_scope         which tour is reinforced: "global" best-so-far or
                       "iteration" best
    worst_scope        which tour is penalized: "iteration" worst or
                       "global" worst-so-far
    """

    reinforce_weight: float = None
    penalty_weight: float = 0.05
    stagnation_window: float = 20
    improvement_tolerance: float = 1e-6
    escape_blend: float = 0.5
    best_scope: str = "global"
    worst_scope: str = "iteration"

    def __post_init__(self):
        if self.reinforce_weight is not None and not self.reinforce_weight > 0:
            raise ValueError(
                f"reinforce weight must be positive, got {self.reinforce_weight}")
        if not 0.0 <= self.penalty_weight < 1.0:
            raise ValueError(
                f"penalty weight must lie in [0, 1), got {self.penalty_weight}")
        if not self.stagnation_window >= 1:
            raise ValueError(
                f"stagnation window must be at least 1, got {self.stagnation_window}")
        if math.isfinite(self.stagnation_window) and \
                int(self.stagnation_window) != self.stagnation_window:
            raise ValueError("stagnation window must be an integer or math.inf")
        if self.improvement_tolerance < 0:
            raise ValueError("improvement tolerance must be nonnegative")
        if not 0.0 < self.escape_blend <= 1.0:
            raise ValueError(
                f"escape blend must lie in (0, 1], got {self.escape_blend}")
        if self.best_scope not in ("global", "iteration"):
            raise ValueError(f"unknown best scope {self.best_scope!r}")
        if self.worst_scope not in ("iteration", "global"):
            raise ValueError(f"unknown worst scope {self.worst_scope!r}")


@dataclass
class StagnationMonitor:
    """Counts consecutive iterations without meaningful improvement.

    The reference length is the global best at the start of the current
    non-improvement window; improvements must beat it by more than
    `tolerance` (relative) to reset the counter.
    """

    window: float
    tolerance: float = 0.0
    best_at_window_start: float = math.inf
    iterations_since_improvement: int = 0
    last_trigger_iteration: int = 0

    def __post_init__(self):
        if not self.window >= 1:
            raise ValueError(f"window must be at least 1, got {self.window}")


def detect_stagnation(monitor, current_best, iteration):
    """True when the best has not meaningfully improved for `window`
    consecutive iterations; triggering resets the counter so the colony
    gets a fresh window before the next escape."""
    ref = monitor.best_at_window_start
    if ref == math.inf:
        improved = current_best < ref
    else:
        improved = ref > 0 and (ref - current_best) / ref > monitor.tolerance
    if improved:
        monitor.best_at_window_start = current_best
        monitor.iterations_since_improvement = 0
        return False
    monitor.iterations_since_improvement += 1
    if monitor.iterations_since_improvement >= monitor.window:
        monitor.iterations_since_improvement = 0
        monitor.last_trigger_iteration = iteration
        return True
    return False


def global_update_meas(ph, best, worst, params, q):
    """One global trail update: reinforce the best tour, penalize the worst.

    Best-tour edges gain reinforce_weight * q / best.length; worst-tour
    edges are then scaled by (1 - penalty_weight), so edges on both
    tours receive the gain before the penalty.  The floor is applied
    last and symmetry is preserved throughout.
    """
    if best.order.shape[0] != ph.n or worst.order.shape[0] != ph.n:
        raise ValueError("tour dimension does not match the pheromone matrix")
    if best.length > worst.length:
        raise ValueError(
            f"best tour ({best.length}) must not be longer than worst ({worst.length})")
    add_on_tour_edges(ph, best.order, params.reinforce_weight * q / best.length)
    keep = 1.0 - params.penalty_weight
    ii, jj = tour_edges(worst.order)
    ph.tau[ii, jj] *= keep
    ph.tau[jj, ii] *= keep
    apply_floor(ph)
    ph.counters.reinforcements += 1
    ph.counters.penalizations += 1


def escape(ph, params):
    """Blend every trail toward the uniform initial level.

    tau <- (1 - blend) * tau + blend * tau_init: compresses differences
    while preserving their order (blend < 1); blend = 1 is a full reset.
    """
    lam = params.escape_blend
    ph.tau *= 1.0 - lam
    ph.tau += lam * ph.tau_init
    apply_floor(ph)
    ph.counters.escapes += 1


def run_meas(inst, cfg, rng=None, observer=None):
    """Solver run with the global-only update policy.

    Per iteration: construct m tours, evaporate, apply one reinforcement
    (best tour per cfg.meas.best_scope) and one penalization (worst tour
    per cfg.meas.worst_scope), then escape if the stagnation monitor
    fires.  No per-ant deposits occur anywhere.
    """
    params = cfg.meas
    monitor = StagnationMonitor(window=params.stagnation_window,
                                tolerance=params.improvement_tolerance)
    state = {"global_worst": None}

    def update(ph, stats):
        if params.best_scope == "global":
            best = stats.global_best
        else:
            best = stats.tour(stats.best_index)
        worst = stats.tour(stats.worst_index)
        if params.worst_scope == "global":
            if state["global_worst"] is None or \
                    worst.length > state["global_worst"].length:
                state["global_worst"] = worst
            worst = state["global_worst"]
        global_update_meas(ph, best, worst, params, cfg.q_deposit)
        if detect_stagnation(monitor, stats.global_best.length, stats.iteration):
            escape(ph, params)

    return run_colony(inst, cfg, rng, update, observer)
