"""Exact MMS/WMMS computation by exhaustive enumeration.

The weighted maximin share of agent i is the minimum over all ordered
n-partitions <A_1..A_n> of max_j V_i(A_j) * w_i / w_j; bundle j is tied to
entitlement w_j, so partitions are ordered and empty bundles are allowed
(excluding them could only raise the minimum; a flag forbids them for
sensitivity checks).

All arithmetic is exact. Internally each agent's search runs on integers:
costs are cleared of denominators and the weight ratios w_i/w_j become the
integer multipliers W_i * lcm(W)/W_j, so the objective is an integer and
comparisons are exact and fast. Two independent strategies are provided -
a direct base-n digit counter and a pruned chore-by-chore recursion - and
must agree exactly; tests lean on that redundancy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator

from .errors import SizeLimitExceeded
from .model import AgentRatio, Assignment, Instance, RatioReport

DEFAULT_CAP = 2**24


@dataclass(frozen=True)
class WmmsProfile:
    """Per-agent exact WMMS values with the partition witnessing each."""

    values: tuple[Fraction, ...]
    witnesses: tuple[Assignment, ...]


def _check_cap(m: int, n: int, cap: int) -> None:
    if n**m > cap:
        raise SizeLimitExceeded(f"{n}^{m} assignments exceed cap {cap}")


def enumerate_assignments(m: int, n: int, cap: int = DEFAULT_CAP,
                          allow_empty: bool = True) -> Iterator[Assignment]:
    """Yield every ordered assignment of m chores to n bundles (n^m total)."""
    if m < 0 or n < 1:
        raise ValueError("need m >= 0 and n >= 1")
    _check_cap(m, n, cap)
    for code in product(range(n), repeat=m):
        if not allow_empty and len(set(code)) < n:
            continue
        bundles = [set() for _ in range(n)]
        for chore, bundle in enumerate(code):
            bundles[bundle].add(chore)
        yield Assignment.from_lists(bundles, m)


def _integer_setup(instance: Instance, agent: int, weighted: bool):
    """Scale agent's problem to integers.

    Returns (costs, mults, denom): integer chore costs, integer bundle
    multipliers, and the denominator such that a scaled objective value v
    means Fraction(v, denom).
    """
    row = instance.costs[agent]
    cd = math.lcm(*(c.denominator for c in row)) if row else 1
    costs = [int(c * cd) for c in row]
    if not weighted:
        return costs, [1] * instance.n, cd
    weights = instance.entitlements.weights
    wd = math.lcm(*(w.denominator for w in weights))
    scaled = [int(w * wd) for w in weights]
    L = math.lcm(*scaled)
    mults = [scaled[agent] * (L // Wj) for Wj in scaled]
    return costs, mults, cd * L


def _direct_min(costs: list[int], mults: list[int], allow_empty: bool):
    """Base-n digit counter over all assignments; the reference strategy."""
    n = len(mults)
    m = len(costs)
    best = None
    best_code = None
    for code in product(range(n), repeat=m):
        if not allow_empty and len(set(code)) < n:
            continue
        loads = [0] * n
        for chore, bundle in enumerate(code):
            loads[bundle] += costs[chore]
        value = max(loads[j] * mults[j] for j in range(n))
        if best is None or value < best:
            best = value
            best_code = code
    return best, best_code


def _recursive_min(costs: list[int], mults: list[int], allow_empty: bool):
    """Pruned chore-by-chore placement; must agree with _direct_min exactly.

    Chores are placed in descending cost order. Branches are cut when the
    running maximum already reaches the incumbent, and bundles with equal
    multiplier and equal load are interchangeable, so only the first is
    tried.
    """
    n = len(mults)
    m = len(costs)
    order = sorted(range(m), key=lambda b: -costs[b])
    pinned: list[int] = []
    if allow_empty:
        # Zero-cost chores never move the objective; pin them to bundle 0.
        pinned = [b for b in order if costs[b] == 0]
        order = [b for b in order if costs[b] > 0]

    loads = [0] * n
    counts = [0] * n
    code = [0] * m
    best_value: int | None = None
    best_code: tuple[int, ...] | None = None

    def place(pos: int, running: int) -> None:
        nonlocal best_value, best_code
        if best_value is not None and running >= best_value:
            return
        remaining = len(order) - pos
        if not allow_empty and sum(1 for c in counts if c == 0) > remaining:
            return
        if pos == len(order):
            best_value = running
            best_code = tuple(code)
            return
        chore = order[pos]
        c = costs[chore]
        tried: set[tuple[int, int, int]] = set()
        for j in range(n):
            key = (mults[j], loads[j], 1 if counts[j] else 0)
            if key in tried:
                continue
            tried.add(key)
            loads[j] += c
            counts[j] += 1
            code[chore] = j
            value = loads[j] * mults[j]
            place(pos + 1, running if value <= running else value)
            loads[j] -= c
            counts[j] -= 1

    place(0, 0)
    if best_code is None:
        return None, None
    full = list(best_code)
    for b in pinned:
        full[b] = 0
    return best_value, tuple(full)


def _minimize(instance: Instance, agent: int, weighted: bool, strategy: str,
              cap: int, allow_empty: bool) -> tuple[Fraction, Assignment]:
    _check_cap(instance.m, instance.n, cap)
    costs, mults, denom = _integer_setup(instance, agent, weighted)
    if strategy == "direct":
        value, code = _direct_min(costs, mults, allow_empty)
    elif strategy == "recursive":
        value, code = _recursive_min(costs, mults, allow_empty)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    if value is None:
        raise ValueError("no admissible partition (m < n with empty bundles forbidden)")
    bundles = [set() for _ in range(instance.n)]
    for chore, bundle in enumerate(code):
        bundles[bundle].add(chore)
    return Fraction(value, denom), Assignment.from_lists(bundles, instance.m)


def mms(instance: Instance, agent: int, strategy: str = "recursive",
        cap: int = DEFAULT_CAP, allow_empty: bool = True) -> Fraction:
    """Min over ordered n-partitions of the max bundle cost under V_agent."""
    value, _ = _minimize(instance, agent, False, strategy, cap, allow_empty)
    return value


def wmms(instance: Instance, agent: int, strategy: str = "recursive",
         cap: int = DEFAULT_CAP, allow_empty: bool = True) -> Fraction:
    """Min over ordered n-partitions of max_j V_agent(A_j) * w_agent / w_j."""
    value, _ = _minimize(instance, agent, True, strategy, cap, allow_empty)
    return value


def wmms_with_witness(instance: Instance, agent: int, strategy: str = "recursive",
                      cap: int = DEFAULT_CAP, allow_empty: bool = True):
    return _minimize(instance, agent, True, strategy, cap, allow_empty)


def wmms_profile(instance: Instance, strategy: str = "recursive",
                 cap: int = DEFAULT_CAP, allow_empty: bool = True) -> WmmsProfile:
    values = []
    witnesses = []
    for i in range(instance.n):
        value, witness = _minimize(instance, i, True, strategy, cap, allow_empty)
        values.append(value)
        witnesses.append(witness)
    return WmmsProfile(values=tuple(values), witnesses=tuple(witnesses))


def weighted_partition_max(instance: Instance, agent: int,
                           assignment: Assignment) -> Fraction:
    """Evaluate the weighted inner max on one partition (witness re-check)."""
    weights = instance.entitlements.weights
    return max(
        instance.agent_cost(agent, bundle) * weights[agent] / weights[j]
        for j, bundle in enumerate(assignment.bundles)
    )


def ratio_report(instance: Instance, assignment: Assignment,
                 profile: WmmsProfile) -> RatioReport:
    """Per-agent cost/WMMS ratios; zero-cost bundles count as ratio 0."""
    per_agent = []
    max_ratio = Fraction(0)
    infinite = False
    for i in range(instance.n):
        cost = instance.agent_cost(i, assignment.bundles[i])
        value = profile.values[i]
        if cost == 0:
            ratio: Fraction | None = Fraction(0)
        elif value == 0:
            ratio = None  # positive cost against zero WMMS: infinite
            infinite = True
        else:
            ratio = cost / value
            if ratio > max_ratio:
                max_ratio = ratio
        per_agent.append(AgentRatio(cost=cost, wmms=value, ratio=ratio))
    return RatioReport(
        per_agent=tuple(per_agent),
        max_ratio=None if infinite else max_ratio,
    )
