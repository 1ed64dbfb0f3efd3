import pytest

from choreknife.gen import GenSpec, generate


@pytest.fixture
def small_instances():
    """Deterministic pool of oracle-range instances (n <= 3, m <= 6)."""
    pool = []
    for seed in range(40):
        n = 1 + seed % 3
        m = 2 + seed % 5
        mode = ("dirichlet_unit", "uniform", "power_of_two")[seed % 3]
        pool.append(generate(GenSpec(n=n, m=m, weight_mode=mode,
                                     cost_mode="iid_uniform_integer",
                                     cost_max=9, seed=seed)))
    return pool
