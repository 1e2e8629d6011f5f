"""Pheromone trail state and the trail-update operations shared by all solvers."""

from dataclasses import dataclass

import numpy as np

from .instance import nearest_neighbor_tour

TAU_MIN_FACTOR = 1e-4  # trail floor relative to the initial trail level


@dataclass
class UpdateCounters:
    """Audit counts of trail-update events, by kind.

    per_ant_deposits counts tours deposited through the every-ant rule;
    reinforcements and penalizations count best-tour gains and
    worst-tour reductions; escapes counts trail smoothings.
    """

    per_ant_deposits: int = 0
    reinforcements: int = 0
    penalizations: int = 0
    escapes: int = 0


class PheromoneMatrix:
    """Symmetric nonnegative trail intensities with a positive floor.

    Off-diagonal entries stay >= tau_min after every update so transition
    weights never become all-zero; the diagonal is unused and kept at 0.
    Owned by exactly one run; never shared between concurrent runs.
    """

    def __init__(self, tau, tau_min, tau_init):
        self.tau = np.asarray(tau, dtype=np.float64)
        self.tau_min = float(tau_min)
        self.tau_init = float(tau_init)
        self.counters = UpdateCounters()

    @property
    def n(self):
        return self.tau.shape[0]


def init_pheromone(inst, cfg):
    """Uniform initial trails tau0 = m / L_nn (greedy tour length from node 0)."""
    l_nn = nearest_neighbor_tour(inst, 0).length
    tau0 = cfg.m / l_nn
    tau = np.full((inst.n, inst.n), tau0)
    np.fill_diagonal(tau, 0.0)
    return PheromoneMatrix(tau, tau0 * TAU_MIN_FACTOR, tau0)


def apply_floor(ph):
    """Clamp trails at the floor; the diagonal stays zero."""
    np.maximum(ph.tau, ph.tau_min, out=ph.tau)
    np.fill_diagonal(ph.tau, 0.0)


def evaporate(ph, rho):
    """Scale every trail by (1 - rho), clamped at the floor, in place."""
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"evaporation rate must lie in [0, 1], got {rho}")
    ph.tau *= 1.0 - rho
    apply_floor(ph)


def tour_edges(order):
    """Directed edge endpoints of a closed tour, closing edge last."""
    return order, np.roll(order, -1)


def add_on_tour_edges(ph, order, amount):
    """Add `amount` to both directions of every edge on the tour.

    The directed edge pairs of a tour are distinct, so the fancy-indexed
    adds never collide within one statement.
    """
    ii, jj = tour_edges(order)
    ph.tau[ii, jj] += amount
    ph.tau[jj, ii] += amount


def deposit_as(ph, tours, q):
    """Every tour deposits q / length on each of its edges, symmetrically."""
    for tour in tours:
        add_on_tour_edges(ph, tour.order, q / tour.length)
    ph.counters.per_ant_deposits += len(tours)


def deposit_elite(ph, best, e, q):
    """Extra deposit of e * q / length on every edge of the best tour."""
    if e < 0:
        raise ValueError(f"elite weight must be nonnegative, got {e}")
    add_on_tour_edges(ph, best.order, e * q / best.length)
    ph.counters.reinforcements += 1
