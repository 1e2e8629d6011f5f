import itertools

import numpy as np
import pytest

from acotsp import (Instance, brute_force_optimum, generate_instance,
                    held_karp_exact, tour_length)


def exhaustive_reference(inst):
    """Independent brute force in plain Python (no shared code paths)."""
    best = None
    for tail in itertools.permutations(range(1, inst.n)):
        order = (0,) + tail
        length = sum(inst.dist[order[k], order[(k + 1) % inst.n]]
                     for k in range(inst.n))
        if best is None or length < best:
            best = length
    return best


def test_brute_force_triangle(triangle):
    tour = brute_force_optimum(triangle)
    assert tour.length == 12
    assert tour.order.tolist() == [0, 1, 2]


def test_brute_force_unit_square(unit_square):
    tour = brute_force_optimum(unit_square)
    assert tour.length == 4
    assert tour.order.tolist() == [0, 1, 2, 3]  # perimeter, lexicographic tie-break


def test_brute_force_lexicographic_tie_break():
    # all tours of a uniform metric tie; the canonical smallest order must win
    uniform = Instance("uniform", np.ones((5, 5)) - np.eye(5))
    assert brute_force_optimum(uniform).order.tolist() == [0, 1, 2, 3, 4]


def test_held_karp_small(triangle, two_node):
    assert held_karp_exact(triangle).length == 12
    assert held_karp_exact(two_node).length == 4


def test_oracles_agree_with_python_reference():
    for seed in range(5):
        inst = generate_instance(7, 200 + seed)
        expected = exhaustive_reference(inst)
        assert brute_force_optimum(inst).length == expected
        assert held_karp_exact(inst).length == expected


def test_oracles_agree_on_random_instances():
    rng = np.random.default_rng(17)
    for _ in range(12):
        n = int(rng.integers(4, 9))
        inst = generate_instance(n, int(rng.integers(10_000)))
        bf = brute_force_optimum(inst)
        hk = held_karp_exact(inst)
        assert bf.length == hk.length
        assert tour_length(inst, bf.order) == bf.length
        assert tour_length(inst, hk.order) == hk.length


def test_oracle_guards(rand10):
    with pytest.raises(ValueError, match="n <= 11"):
        brute_force_optimum(generate_instance(12, 0))
    with pytest.raises(ValueError, match="n <= 18"):
        held_karp_exact(generate_instance(19, 0))
    # at the guard boundary both still run
    assert brute_force_optimum(generate_instance(11, 3)).length == \
        held_karp_exact(generate_instance(11, 3)).length
