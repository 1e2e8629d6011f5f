import numpy as np
import pytest

from acotsp import Instance, data_path, generate_instance, load_instance


@pytest.fixture
def triangle():
    # 3-4-5 right triangle: exact integer distances 3, 4, 5; cycle length 12
    return Instance.from_coords("triangle", np.array([(0, 0), (3, 0), (0, 4)], dtype=float))


@pytest.fixture
def two_node():
    return Instance("pair", [[0.0, 2.0], [2.0, 0.0]])


@pytest.fixture
def unit_square():
    # explicit weights keep the sqrt(2) diagonals exact (EUC_2D would round)
    s = 2.0 ** 0.5
    return Instance("square", [[0, 1, s, 1],
                               [1, 0, 1, s],
                               [s, 1, 0, 1],
                               [1, s, 1, 0]])


@pytest.fixture
def rand10():
    return generate_instance(10, 42)


@pytest.fixture(scope="session")
def berlin52():
    return load_instance(data_path("berlin52.tsp"))
