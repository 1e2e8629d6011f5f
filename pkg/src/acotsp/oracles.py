"""Exact small-instance solvers used to verify the stochastic solvers."""

import numpy as np

from . import kernels
from .instance import Tour

BRUTE_FORCE_MAX_N = 11   # (n-1)!/2 cycles; factorial guard
HELD_KARP_MAX_N = 18     # 2^n * n table; memory guard


def brute_force_optimum(inst):
    """Globally optimal tour by exhaustive enumeration (n <= 11).

    Every distinct cycle is evaluated once (node 0 fixed first, one
    orientation); ties resolve to the lexicographically smallest order.
    """
    if inst.n > BRUTE_FORCE_MAX_N:
        raise ValueError(
            f"brute force is limited to n <= {BRUTE_FORCE_MAX_N}, got {inst.n}")
    order, length = kernels.active().brute_force(inst.dist)
    return Tour(np.asarray(order, dtype=np.int64), length)


def held_karp_exact(inst):
    """Globally optimal tour via subset dynamic programming (n <= 18)."""
    if inst.n > HELD_KARP_MAX_N:
        raise ValueError(
            f"Held-Karp is limited to n <= {HELD_KARP_MAX_N}, got {inst.n}")
    order, length = kernels.active().held_karp(inst.dist)
    return Tour(np.asarray(order, dtype=np.int64), length)
