"""Seeded random and structured instance generation.

Weights come out as small exact rationals (the oracle's integer scaling
stays fast when denominators are small), costs default to integers, and the
same seed always reproduces the same instance byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .model import Instance, make_instance

# Simplex draws are quantized to this denominator so generated weights stay
# exact rationals with cheap lcm structure.
WEIGHT_DENOMINATOR = 720


@dataclass(frozen=True)
class GenSpec:
    n: int
    m: int
    weight_mode: Union[str, Sequence] = "dirichlet_unit"
    cost_mode: str = "iid_uniform_integer"
    cost_max: int = 20
    seed: int = 0


def _weights_dirichlet(rng: random.Random, n: int) -> list[Fraction]:
    """Gaps between sorted uniform cut points: the discrete analogue of a
    uniform draw from the simplex interior."""
    if n == 1:
        return [Fraction(1)]
    q = WEIGHT_DENOMINATOR
    cuts = sorted(rng.sample(range(1, q), n - 1))
    points = [0] + cuts + [q]
    return [Fraction(points[i + 1] - points[i], q) for i in range(n)]


def _weights_power_of_two(rng: random.Random, n: int) -> list[Fraction]:
    """Weights proportional to random powers of two; every pairwise ratio is
    a power of two before and after normalization."""
    exponents = [rng.randint(0, 3) for _ in range(n)]
    raw = [Fraction(2**e) for e in exponents]
    total = sum(raw)
    return [x / total for x in raw]


def _costs(rng: random.Random, spec: GenSpec) -> list[list[int]]:
    n, m, top = spec.n, spec.m, spec.cost_max
    if spec.cost_mode == "iid_uniform_integer":
        return [[rng.randint(0, top) for _ in range(m)] for _ in range(n)]
    if spec.cost_mode == "identical_agents":
        row = [rng.randint(0, top) for _ in range(m)]
        return [list(row) for _ in range(n)]
    if spec.cost_mode == "correlated":
        # Every agent sorts her own draws, so all agents share the identity
        # ranking over chores (rank-preserving noise around a common order).
        return [sorted(rng.randint(0, top) for _ in range(m)) for _ in range(n)]
    raise ValueError(f"unknown cost_mode {spec.cost_mode!r}")


def generate(spec: GenSpec) -> Instance:
    """Deterministic instance for a spec; output always validates."""
    if spec.n < 1 or spec.m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    rng = random.Random(spec.seed)
    if isinstance(spec.weight_mode, str):
        if spec.weight_mode == "uniform":
            weights: Sequence = [Fraction(1, spec.n)] * spec.n
        elif spec.weight_mode == "dirichlet_unit":
            weights = _weights_dirichlet(rng, spec.n)
        elif spec.weight_mode == "power_of_two":
            weights = _weights_power_of_two(rng, spec.n)
        else:
            raise ValueError(f"unknown weight_mode {spec.weight_mode!r}")
    else:
        weights = list(spec.weight_mode)
    costs = _costs(rng, spec)
    return make_instance(weights, costs)
