"""Instance schema and exact-arithmetic primitives.

Everything in the solver core runs on `fractions.Fraction`: the entitlement
rounding step produces power-of-two ratios, the moving knife compares copy
counts and thresholds exactly, and the oracle certifies values by exact
equality. Floats never enter this layer; JSON numbers are converted through
their decimal expansion.

Agents are stored in ascending entitlement order. The permutation back to
input order is kept on the `Entitlements` so reports can speak the caller's
language.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    DimensionMismatch,
    NegativeCost,
    NonPositiveFactor,
    NonPositiveWeight,
    WeightSumError,
)

ONE = Fraction(1)


def to_rational(value) -> Fraction:
    """Convert a JSON-ish scalar to an exact rational.

    Strings may be fractions ("3/8") or decimals ("0.375"); ints are exact;
    floats go through their shortest decimal repr, so 0.3 means 3/10 and not
    the nearest binary double.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


@dataclass(frozen=True)
class Entitlements:
    """Agent share weights, sorted ascending, summing to exactly 1.

    ``order[k]`` is the input position of the agent stored at sorted slot k.
    Sorting ties are broken by input position, so construction is
    deterministic and replayable.
    """

    weights: tuple[Fraction, ...]
    order: tuple[int, ...]

    @classmethod
    def from_values(cls, values: Sequence) -> "Entitlements":
        raw = [to_rational(v) for v in values]
        if not raw:
            raise NonPositiveWeight("at least one agent is required")
        for w in raw:
            if w <= 0 or w > 1:
                raise NonPositiveWeight(f"weight {w} outside (0, 1]")
        if sum(raw) != ONE:
            raise WeightSumError(f"weights sum to {sum(raw)}, expected 1")
        indexed = sorted(range(len(raw)), key=lambda i: (raw[i], i))
        return cls(
            weights=tuple(raw[i] for i in indexed),
            order=tuple(indexed),
        )

    @property
    def n(self) -> int:
        return len(self.weights)

    def in_input_order(self) -> tuple[Fraction, ...]:
        """Invert the stored permutation, recovering the caller's ordering."""
        out = [ONE] * self.n
        for k, source in enumerate(self.order):
            out[source] = self.weights[k]
        return tuple(out)


@dataclass(frozen=True)
class Instance:
    """n agents with entitlements plus an n x m nonnegative cost matrix.

    Cost row i belongs to the agent at sorted entitlement slot i;
    ``agent_labels`` follows the same ordering.
    """

    entitlements: Entitlements
    costs: tuple[tuple[Fraction, ...], ...]
    agent_labels: tuple[str, ...]
    chore_labels: tuple[str, ...]

    @property
    def n(self) -> int:
        return self.entitlements.n

    @property
    def m(self) -> int:
        return len(self.chore_labels)

    def agent_cost(self, agent: int, chores: Iterable[int]) -> Fraction:
        row = self.costs[agent]
        return sum((row[b] for b in chores), Fraction(0))

    def total_cost(self, agent: int) -> Fraction:
        return sum(self.costs[agent], Fraction(0))

    def to_document(self) -> dict:
        """Emit the instance in the caller's original agent order, so a
        write/read round-trip reproduces the permutation metadata too."""
        inverse = [0] * self.n
        for slot, source in enumerate(self.entitlements.order):
            inverse[source] = slot
        return {
            "weights": [str(w) for w in self.entitlements.in_input_order()],
            "costs": [[str(c) for c in self.costs[slot]] for slot in inverse],
            "agent_labels": [self.agent_labels[slot] for slot in inverse],
            "chore_labels": list(self.chore_labels),
        }


@dataclass(frozen=True)
class Assignment:
    """Ordered list of n disjoint chore bundles covering all m chores."""

    bundles: tuple[frozenset[int], ...]
    m: int

    def __post_init__(self):
        seen: set[int] = set()
        total = 0
        for bundle in self.bundles:
            total += len(bundle)
            seen.update(bundle)
        if total != len(seen) or seen != set(range(self.m)):
            raise DimensionMismatch(
                f"bundles must partition the {self.m} chores exactly"
            )

    @classmethod
    def from_lists(cls, bundles: Sequence[Iterable[int]], m: int) -> "Assignment":
        return cls(tuple(frozenset(b) for b in bundles), m)

    @property
    def n(self) -> int:
        return len(self.bundles)


@dataclass(frozen=True)
class AgentRatio:
    cost: Fraction
    wmms: Fraction
    ratio: Fraction | None  # None flags positive cost against a zero WMMS


@dataclass(frozen=True)
class RatioReport:
    """Per-agent cost/WMMS ratios for a complete assignment.

    ``max_ratio`` is None when some agent with WMMS 0 carries positive cost
    (an infinite ratio); a zero-cost bundle always counts as ratio 0.
    """

    per_agent: tuple[AgentRatio, ...]
    max_ratio: Fraction | None

    def within(self, alpha) -> bool:
        if self.max_ratio is None:
            return False
        return self.max_ratio <= to_rational(alpha)


def validate_instance(document: dict) -> Instance:
    """Build an Instance from a parsed JSON document, establishing invariants.

    Agents are re-sorted by ascending entitlement (stable in input order) and
    the cost rows and labels are permuted to match.
    """
    if not isinstance(document, dict):
        raise DimensionMismatch("instance document must be a JSON object")
    try:
        raw_weights = document["weights"]
        raw_costs = document["costs"]
    except KeyError as exc:
        raise DimensionMismatch(f"missing required field {exc}") from exc

    entitlements = Entitlements.from_values(raw_weights)
    n = entitlements.n
    if len(raw_costs) != n:
        raise DimensionMismatch(f"expected {n} cost rows, got {len(raw_costs)}")
    m = len(raw_costs[0]) if raw_costs else 0
    rows: list[tuple[Fraction, ...]] = []
    for row in raw_costs:
        if len(row) != m:
            raise DimensionMismatch("ragged cost matrix")
        converted = tuple(to_rational(c) for c in row)
        for c in converted:
            if c < 0:
                raise NegativeCost(f"cost entry {c} is negative")
        rows.append(converted)

    agent_labels = list(document.get("agent_labels") or [f"a{i+1}" for i in range(n)])
    chore_labels = list(document.get("chore_labels") or [f"b{j+1}" for j in range(m)])
    if len(agent_labels) != n or len(chore_labels) != m:
        raise DimensionMismatch("label lists disagree with matrix dimensions")

    perm = entitlements.order
    return Instance(
        entitlements=entitlements,
        costs=tuple(rows[i] for i in perm),
        agent_labels=tuple(agent_labels[i] for i in perm),
        chore_labels=tuple(chore_labels),
    )


def load_instance(path) -> Instance:
    with open(path) as fh:
        document = json.load(fh, parse_float=Fraction, parse_int=int)
    return validate_instance(document)


def scale_costs(instance: Instance, factors: Sequence) -> Instance:
    """Multiply each agent's cost row by a positive per-agent factor.

    Entitlements are untouched; scaling a row by k scales that agent's WMMS
    by k and nothing else.
    """
    fs = [to_rational(f) for f in factors]
    if len(fs) != instance.n:
        raise DimensionMismatch(f"expected {instance.n} factors, got {len(fs)}")
    for f in fs:
        if f <= 0:
            raise NonPositiveFactor(f"factor {f} must be positive")
    return Instance(
        entitlements=instance.entitlements,
        costs=tuple(
            tuple(c * fs[i] for c in row) for i, row in enumerate(instance.costs)
        ),
        agent_labels=instance.agent_labels,
        chore_labels=instance.chore_labels,
    )


def make_instance(weights: Sequence, costs: Sequence[Sequence], agent_labels=None,
                  chore_labels=None) -> Instance:
    """Programmatic constructor used throughout the tests and generators."""
    document = {"weights": list(weights), "costs": [list(r) for r in costs]}
    if agent_labels is not None:
        document["agent_labels"] = list(agent_labels)
    if chore_labels is not None:
        document["chore_labels"] = list(chore_labels)
    return validate_instance(document)
