"""Colony machinery: transition rule, tour construction, and the
ant-system / elite-ant-system baselines.

A run is strictly sequential and fully determined by (instance, config,
seed): all randomness flows through one seeded generator, and the
construction kernels are deterministic, so identical runs produce
bit-identical histories.  Independent runs may execute concurrently.
"""

import math
import time
import warnings
from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .instance import Tour, make_tour
from .pheromone import (UpdateCounters, deposit_as, deposit_elite,
                        evaporate, init_pheromone)

ZERO_DISTANCE_CLAMP = 1e-10  # stand-in distance for coincident nodes


@dataclass
class ColonyConfig:
    """All solver tunables.

    m               ants per iteration
    elite_weight    extra best-tour deposit weight for the elite variant
    alpha, beta     trail and visibility exponents of the transition rule
    rho             evaporation rate in [0, 1]
    q_deposit       deposit constant (scales all deposits jointly)
    max_iterations  iteration budget (>= 1)
    seed            RNG seed used when no generator is passed to a run
    random_starts   draw start nodes randomly instead of round-robin
    meas            parameters of the global-only update policy
    """

    m: int
    elite_weight: float
    max_iterations: int = 1000
    alpha: float = 1.0
    beta: float = 3.0
    rho: float = 0.1
    q_deposit: float = 1.0
    seed: int = 0
    random_starts: bool = False
    meas: "MeasParams" = None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"need at least one ant, got m={self.m}")
        if self.elite_weight < 0:
            raise ValueError(f"elite weight must be nonnegative, got {self.elite_weight}")
        if self.max_iterations < 1:
            raise ValueError(
                f"iteration budget must be at least 1, got {self.max_iterations}")
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be nonnegative")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")
        if self.q_deposit <= 0:
            raise ValueError(f"deposit constant must be positive, got {self.q_deposit}")
        from .meas import MeasParams  # deferred: meas builds on this module
        if self.meas is None:
            self.meas = MeasParams()
        if self.meas.reinforce_weight is None:
            # reuse the elite weight; fall back to 1 when running elite-less
            w = self.elite_weight if self.elite_weight > 0 else 1.0
            self.meas = replace(self.meas, reinforce_weight=w)

    @classmethod
    def for_instance(cls, inst, seed=0, **overrides):
        """Conventional defaults: m = min(n, 50) ants, elite weight ceil(n/4)."""
        values = dict(m=min(inst.n, 50),
                      elite_weight=float(math.ceil(inst.n / 4)),
                      seed=seed)
        values.update(overrides)
        return cls(**values)


@dataclass
class AntState:
    """Partial tour of one ant: current node, visited set, order so far."""

    current: int
    visited: frozenset
    partial_order: tuple

    def __post_init__(self):
        if not self.partial_order:
            raise ValueError("partial_order must contain at least the start node")
        if self.partial_order[-1] != self.current:
            raise ValueError("current must be the last node of partial_order")
        if frozenset(self.partial_order) != self.visited or \
                len(self.partial_order) != len(self.visited):
            raise ValueError("visited must contain exactly the nodes of partial_order")

    @classmethod
    def at(cls, start):
        return cls(current=start, visited=frozenset((start,)),
                   partial_order=(start,))


@dataclass
class RunResult:
    """Outcome of one solver run.

    best_history / worst_history hold the iteration-best and
    iteration-worst tour lengths; best_tour is the global best, whose
    length equals the minimum over every constructed tour.
    """

    best_tour: Tour
    best_history: np.ndarray
    worst_history: np.ndarray
    last_improvement_iter: int
    escapes_triggered: int
    evaluations: int
    wall_time_s: float
    update_counts: UpdateCounters


def visibility(inst):
    """Inverse-distance heuristic matrix.

    Zero-length edges between distinct nodes have no defined inverse;
    they are treated as length 1e-10 and flagged with a RuntimeWarning.
    The diagonal is left at zero (never a legal move).
    """
    d = inst.dist.copy()
    off = ~np.eye(inst.n, dtype=bool)
    degenerate = (d == 0) & off
    if degenerate.any():
        warnings.warn(
            f"instance {inst.name!r}: {int(np.count_nonzero(degenerate))} "
            "zero-distance edge(s); visibility clamped",
            RuntimeWarning, stacklevel=2)
        d[degenerate] = ZERO_DISTANCE_CLAMP
    eta = np.zeros_like(d)
    eta[off] = 1.0 / d[off]
    return eta


def trail_weights(tau, alpha, eta_beta):
    """Per-edge attractiveness tau^alpha * eta^beta with a zero diagonal."""
    w = tau ** alpha * eta_beta
    np.fill_diagonal(w, 0.0)
    return w


def transition_probabilities(inst, ph, ant, cfg):
    """Move probabilities from the ant's current node.

    Feasible (unvisited) nodes get tau^alpha * eta^beta normalized over
    the feasible set; visited nodes get exactly zero.
    """
    n = inst.n
    visited = np.zeros(n, dtype=bool)
    visited[list(ant.visited)] = True
    if visited.all():
        raise ValueError("no unvisited node remains")
    eta = visibility(inst)
    w = ph.tau[ant.current] ** cfg.alpha * eta[ant.current] ** cfg.beta
    w[visited] = 0.0
    total = w.sum()
    if not total > 0:
        raise ValueError("transition weights sum to zero; trails degenerate")
    return w / total


def select_next(probabilities, rng):
    """Roulette-wheel draw: first index whose cumulative probability
    exceeds a uniform u in [0, 1); deterministic given the rng state."""
    p = np.asarray(probabilities, dtype=np.float64)
    if np.any(p < 0):
        raise ValueError("probabilities must be nonnegative")
    if not np.any(p > 0):
        raise ValueError("all-zero probability vector")
    cum = np.cumsum(p)
    u = rng.random()
    idx = int(np.searchsorted(cum, u, side="right"))
    if idx >= p.size:
        idx = int(np.flatnonzero(p > 0)[-1])
    return idx


def construct_tour(inst, ph, cfg, start, rng):
    """Roulette-construct a full closed tour from `start`.

    Uses the same kernel as the run loops, so a given rng state always
    yields the same tour that a run would build.
    """
    if not 0 <= start < inst.n:
        raise IndexError(f"start node {start} out of range for n={inst.n}")
    eta_beta = visibility(inst) ** cfg.beta
    weights = trail_weights(ph.tau, cfg.alpha, eta_beta)
    uniforms = rng.random((1, inst.n - 1))
    orders = kernels.active().construct_tours(
        weights, np.array([start], dtype=np.int64), uniforms)
    return make_tour(inst, orders[0])


@dataclass
class IterationStats:
    """Snapshot handed to update policies and observers once per iteration."""

    iteration: int          # 1-based
    orders: np.ndarray      # (m, n) tours constructed this iteration
    lengths: np.ndarray     # (m,)
    best_index: int
    worst_index: int
    global_best: Tour
    improved: bool

    def tour(self, index):
        return Tour(self.orders[index].copy(), float(self.lengths[index]))

    def tours(self):
        return [self.tour(i) for i in range(self.orders.shape[0])]


def run_colony(inst, cfg, rng, update, observer=None):
    """Shared iteration loop: construct m tours, evaporate, apply the
    policy's trail update, record history.

    `update(ph, stats)` owns everything after evaporation.  `observer`,
    when given, is called as observer(iteration, ph, stats) at the end
    of every iteration.
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    backend = kernels.active()
    n, m = inst.n, cfg.m
    eta_beta = visibility(inst) ** cfg.beta
    ph = init_pheromone(inst, cfg)
    best_hist = np.empty(cfg.max_iterations)
    worst_hist = np.empty(cfg.max_iterations)
    global_best = None
    last_improvement = 0
    start_counter = 0
    t0 = time.perf_counter()
    for it in range(1, cfg.max_iterations + 1):
        weights = trail_weights(ph.tau, cfg.alpha, eta_beta)
        if cfg.random_starts:
            starts = rng.integers(0, n, size=m)
        else:
            starts = (start_counter + np.arange(m, dtype=np.int64)) % n
            start_counter = (start_counter + m) % n
        uniforms = rng.random((m, n - 1))
        orders = backend.construct_tours(weights, starts, uniforms)
        lengths = np.cumsum(
            inst.dist[orders, np.roll(orders, -1, axis=1)], axis=1)[:, -1]
        best_idx = int(np.argmin(lengths))
        worst_idx = int(np.argmax(lengths))
        improved = global_best is None or lengths[best_idx] < global_best.length
        if improved:
            global_best = Tour(orders[best_idx].copy(), float(lengths[best_idx]))
            last_improvement = it
        stats = IterationStats(it, orders, lengths, best_idx, worst_idx,
                               global_best, improved)
        evaporate(ph, cfg.rho)
        update(ph, stats)
        best_hist[it - 1] = lengths[best_idx]
        worst_hist[it - 1] = lengths[worst_idx]
        if observer is not None:
            observer(it, ph, stats)
    elapsed = time.perf_counter() - t0
    best_hist.setflags(write=False)
    worst_hist.setflags(write=False)
    return RunResult(best_tour=global_best,
                     best_history=best_hist,
                     worst_history=worst_hist,
                     last_improvement_iter=last_improvement,
                     escapes_triggered=ph.counters.escapes,
                     evaluations=m * cfg.max_iterations,
                     wall_time_s=elapsed,
                     update_counts=ph.counters)


def run_as(inst, cfg, rng=None, observer=None):
    """Ant system: after each iteration every ant deposits q / length."""

    def update(ph, stats):
        deposit_as(ph, stats.tours(), cfg.q_deposit)

    return run_colony(inst, cfg, rng, update, observer)


def run_eas(inst, cfg, rng=None, observer=None):
    """Elite ant system: the every-ant deposit plus an extra
    elite_weight-scaled deposit on the global-best tour."""

    def update(ph, stats):
        deposit_as(ph, stats.tours(), cfg.q_deposit)
        deposit_elite(ph, stats.global_best, cfg.elite_weight, cfg.q_deposit)

    return run_colony(inst, cfg, rng, update, observer)
