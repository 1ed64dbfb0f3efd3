"""Loss-controlled instance transformations used by the solver pipeline.

Three steps, each with an explicit inverse or guarantee:

* sorted chores: each agent's cost row is replaced by its own ascending
  sort, so all agents agree that chore j+1 is at least as costly as chore j.
  A solution maps back chore-by-chore without increasing any agent's cost,
  and per-agent WMMS values are untouched (the value depends only on the
  cost multiset).
* entitlement rounding: weights are snapped down to powers of two and
  renormalized, making every pairwise ratio a power of two at the price of
  at most doubling each WMMS.
* normalization: cost rows are rescaled so the oracle value of every agent
  with nonzero costs equals her entitlement exactly; all-zero rows pass
  through untouched.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import IncompleteSortedAssignment
from .model import Assignment, Entitlements, Instance, scale_costs
from .oracle import WmmsProfile


@dataclass(frozen=True)
class SortedReduction:
    """Sorted-chores instance plus each agent's own cost ranking.

    ``rank_tables[i][j]`` is the original chore holding agent i's j-th
    smallest cost (ties by original index), i.e. the chore whose cost became
    sorted_instance.costs[i][j].
    """

    sorted_instance: Instance
    rank_tables: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class DivisibleReduction:
    """Instance with power-of-two weight ratios plus the weights it replaced."""

    rounded_instance: Instance
    original_weights: Entitlements


def to_sorted(instance: Instance) -> SortedReduction:
    """Sort each agent's cost row ascending, independently per agent."""
    ranks = []
    rows = []
    for row in instance.costs:
        order = sorted(range(instance.m), key=lambda b: (row[b], b))
        ranks.append(tuple(order))
        rows.append(tuple(row[b] for b in order))
    sorted_instance = Instance(
        entitlements=instance.entitlements,
        costs=tuple(rows),
        agent_labels=instance.agent_labels,
        chore_labels=tuple(f"b{j+1}" for j in range(instance.m)),
    )
    return SortedReduction(sorted_instance=sorted_instance, rank_tables=tuple(ranks))


def map_back(sorted_assignment: Assignment, reduction: SortedReduction,
             original: Instance) -> Assignment:
    """Translate a sorted-instance solution into an original-instance one.

    Walking chores b_1..b_m of the sorted instance in order, the recipient
    of sorted chore j gets one still-unassigned original chore from her own
    j+1 cheapest; fewer than j+1 originals are taken so far, so one always
    exists, and its cost is at most her sorted cost. Among the candidates we
    take her cheapest (then lowest index), keeping the slack maximal.
    """
    m = original.m
    if sorted_assignment.m != m or sorted_assignment.n != original.n:
        raise IncompleteSortedAssignment("assignment shape disagrees with instance")
    recipient = [0] * m
    for i, bundle in enumerate(sorted_assignment.bundles):
        for j in bundle:
            recipient[j] = i
    taken = [False] * m
    bundles: list[set[int]] = [set() for _ in range(original.n)]
    for j in range(m):
        agent = recipient[j]
        table = reduction.rank_tables[agent]
        candidates = [b for b in table[: j + 1] if not taken[b]]
        row = original.costs[agent]
        pick = min(candidates, key=lambda b: (row[b], b))
        taken[pick] = True
        bundles[agent].add(pick)
    return Assignment.from_lists(bundles, m)


def power_of_two_floor(x: Fraction) -> Fraction:
    """Largest 2^-a (a a nonnegative integer) that is <= x, for 0 < x <= 1."""
    if not 0 < x <= 1:
        raise ValueError(f"x must be in (0, 1], got {x}")
    a = 0
    while Fraction(1, 2**a) > x:
        a += 1
    return Fraction(1, 2**a)


def round_entitlements(instance: Instance) -> DivisibleReduction:
    """Snap weights to powers of two and renormalize; costs are unchanged.

    The map keeps x/2 <= f(x) <= x, so every rounded pairwise ratio is a
    power of two and exceeds the true ratio by at most a factor 2; each
    agent's WMMS grows by at most that factor.
    """
    old = instance.entitlements
    snapped = [power_of_two_floor(w) for w in old.weights]
    total = sum(snapped)
    rounded = [f / total for f in snapped]
    new_entitlements = Entitlements(weights=tuple(rounded), order=old.order)
    rounded_instance = Instance(
        entitlements=new_entitlements,
        costs=instance.costs,
        agent_labels=instance.agent_labels,
        chore_labels=instance.chore_labels,
    )
    return DivisibleReduction(rounded_instance=rounded_instance, original_weights=old)


def normalize(instance: Instance, profile: WmmsProfile) -> Instance:
    """Rescale cost rows so each agent's WMMS equals her entitlement.

    ``profile`` must be the exact WMMS profile of ``instance``. Agents with
    WMMS 0 have all-zero rows and pass through unscaled.
    """
    weights = instance.entitlements.weights
    factors = []
    for i, value in enumerate(profile.values):
        factors.append(weights[i] / value if value > 0 else Fraction(1))
    return scale_costs(instance, factors)


def is_entitlement_divisible(entitlements: Entitlements) -> bool:
    """True when every pairwise max weight ratio is an integer.

    The rounding step produces the stronger power-of-two form, but the
    solver itself only needs integrality (its copy counts are 2*w_i/w_minp).
    """
    for i, wi in enumerate(entitlements.weights):
        for wj in entitlements.weights[i + 1:]:
            if max(wi / wj, wj / wi).denominator != 1:
                return False
    return True


def has_power_of_two_ratios(entitlements: Entitlements) -> bool:
    """True when every pairwise max weight ratio is a power of two."""
    for i, wi in enumerate(entitlements.weights):
        for wj in entitlements.weights[i + 1:]:
            ratio = max(wi / wj, wj / wi)
            if ratio.denominator != 1 or ratio.numerator & (ratio.numerator - 1):
                return False
    return True
