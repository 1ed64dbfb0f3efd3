"""The layered moving knife solver and its runtime verification hooks.

Agents (sorted by ascending entitlement) live in three layers: a queue
prefix Q, an in-progress middle P, and a dead suffix D. Chores, sorted
ascending in cost for every agent, are consumed from the most expensive end.
Each round builds a copy multiset holding 2*w_i/w_minp copies of every
in-progress agent, then repeatedly grows a knife interval leftward while
some copy can still afford it at the 5*w_minp threshold, hands the interval
to one such copy, and continues until the copies or the chores run out.

Two safety measures are asserted at the start of every round and recorded
in the trace:

* weight balance: total in-progress weight >= total dead weight;
* assigned count: m - s >= (sum of weights above minp) / w_minp.

On inputs satisfying the sorted, entitlement-divisible, and WMMS_i = w_i
preconditions these never fire, every agent's total cost stays within
10*w_i, and the end-to-end pipeline (sort, round, normalize, run, map back)
yields a ratio of at most 20 against the original WMMS values.

All comparisons are exact rational comparisons; the affordability threshold
is non-strict. Traces serialize to line-delimited JSON for replay by the
independent checkers in this module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Optional, Sequence

from .errors import (
    NoAffordableAgent,
    NonIntegralCopyCount,
    PreconditionViolation,
    SafetyViolation,
)
from .model import Assignment, Instance, RatioReport
from .oracle import WmmsProfile, ratio_report, wmms_profile
from .reductions import (
    DivisibleReduction,
    SortedReduction,
    is_entitlement_divisible,
    map_back,
    normalize,
    round_entitlements,
    to_sorted,
)

MinpVariant = Literal["prose-largest", "pseudocode-literal"]
THRESHOLD_FACTOR = 5
COPY_FACTOR = 2
PER_AGENT_FACTOR = 10


# ---------------------------------------------------------------------------
# trace events

@dataclass(frozen=True)
class RoundStart:
    round: int
    minp: int
    dead: tuple[int, ...]
    in_progress: tuple[int, ...]
    queued: tuple[int, ...]
    s: int


@dataclass(frozen=True)
class SafetyCheck:
    round: int
    kind: str  # "weight_balance" or "assigned_count"
    lhs: Fraction
    rhs: Fraction
    ok: bool


@dataclass(frozen=True)
class BagAssigned:
    round: int
    agent: int
    lo: int
    hi: int
    cost: Fraction  # bag cost for the recipient


@dataclass(frozen=True)
class RoundEnd:
    round: int
    next_minp: int
    final: bool


KnifeEvent = RoundStart | SafetyCheck | BagAssigned | RoundEnd


@dataclass
class KnifeTrace:
    events: list = field(default_factory=list)

    def add(self, event: KnifeEvent) -> None:
        self.events.append(event)

    def of_kind(self, cls) -> list:
        return [e for e in self.events if isinstance(e, cls)]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(_event_to_doc(e)) + "\n" for e in self.events)

    @classmethod
    def from_jsonl(cls, text: str) -> "KnifeTrace":
        trace = cls()
        for line in text.splitlines():
            if line.strip():
                trace.add(_event_from_doc(json.loads(line)))
        return trace


def _event_to_doc(event: KnifeEvent) -> dict:
    if isinstance(event, RoundStart):
        return {"event": "round_start", "round": event.round, "minp": event.minp,
                "dead": list(event.dead), "in_progress": list(event.in_progress),
                "queued": list(event.queued), "s": event.s}
    if isinstance(event, SafetyCheck):
        return {"event": "safety_check", "round": event.round, "kind": event.kind,
                "lhs": str(event.lhs), "rhs": str(event.rhs), "ok": event.ok}
    if isinstance(event, BagAssigned):
        return {"event": "bag_assigned", "round": event.round, "agent": event.agent,
                "lo": event.lo, "hi": event.hi, "cost": str(event.cost)}
    if isinstance(event, RoundEnd):
        return {"event": "round_end", "round": event.round,
                "next_minp": event.next_minp, "final": event.final}
    raise TypeError(f"unknown event {event!r}")


def _event_from_doc(doc: dict) -> KnifeEvent:
    kind = doc["event"]
    if kind == "round_start":
        return RoundStart(doc["round"], doc["minp"], tuple(doc["dead"]),
                          tuple(doc["in_progress"]), tuple(doc["queued"]), doc["s"])
    if kind == "safety_check":
        return SafetyCheck(doc["round"], doc["kind"], Fraction(doc["lhs"]),
                           Fraction(doc["rhs"]), doc["ok"])
    if kind == "bag_assigned":
        return BagAssigned(doc["round"], doc["agent"], doc["lo"], doc["hi"],
                           Fraction(doc["cost"]))
    if kind == "round_end":
        return RoundEnd(doc["round"], doc["next_minp"], doc["final"])
    raise ValueError(f"unknown event kind {kind!r}")


# ---------------------------------------------------------------------------
# live state

@dataclass
class KnifeState:
    """Live solver state; agents and chores are 0-based, s counts remaining
    chores so the next chore to assign is index s-1."""

    s: int
    dead: set[int]
    in_progress: set[int]
    queued: set[int]
    copies: dict[int, int]
    interval: tuple[int, int]
    minp: int
    round: int


@dataclass(frozen=True)
class CheckViolation:
    """One failed replay check, with the numbers that failed it."""

    kind: str
    round: int
    agent: int
    detail: str


def build_copy_multiset(in_progress: Sequence[int], weights: Sequence[Fraction],
                        minp: int) -> dict[int, int]:
    """Copy counts 2*w_i/w_minp for the in-progress agents.

    Requires entitlement-divisible weights; a fractional count means the
    rounding reduction was skipped.
    """
    counts: dict[int, int] = {}
    w_minp = weights[minp]
    for i in in_progress:
        ratio = COPY_FACTOR * weights[i] / w_minp
        if ratio.denominator != 1:
            raise NonIntegralCopyCount(
                f"copy count {ratio} for agent {i} is not an integer"
            )
        counts[i] = int(ratio)
    return counts


def compute_minp_prime(weights: Sequence[Fraction], minp: int, dead: set[int],
                       in_progress: set[int],
                       variant: MinpVariant = "prose-largest") -> tuple[int, bool]:
    """Next layer boundary: the new in-progress set will be {minp'..minp-1}.

    Default reading: the largest index i <= minp-1 whose layer weight
    sum_{i<=j<minp} w_j reaches the dead-plus-progress weight, which makes
    the weight-balance measure of the next round hold by construction.
    Returns (0, True) when no index qualifies (including minp == 0); a round
    starting in that state must consume every remaining chore.

    The "pseudocode-literal" variant conditions on the full suffix sum
    sum_{j>=i} w_j instead; it is exposed for comparison runs only and can
    hand back a layer that fails the weight-balance measure.
    """
    target = sum((weights[j] for j in dead | in_progress), Fraction(0))
    if variant == "prose-largest":
        acc = Fraction(0)
        for i in range(minp - 1, -1, -1):
            acc += weights[i]
            if acc >= target:
                return i, False
        return 0, True
    if variant == "pseudocode-literal":
        acc = sum(weights[minp:], Fraction(0))
        for i in range(minp - 1, -1, -1):
            acc += weights[i]
            if acc >= target:
                return i, False
        return 0, True
    raise ValueError(f"unknown variant {variant!r}")


def lemma3_bound_check(state: KnifeState, instance: Instance) -> list[CheckViolation]:
    """Check V_i({b_s}) <= w_minp for every agent; empty list means ok.

    In the sorted-chores setting this bounds every unassigned chore, not
    just the one at the pointer.
    """
    violations = []
    if state.s < 1:
        return violations
    chore = state.s - 1
    w_minp = instance.entitlements.weights[state.minp]
    for i in range(instance.n):
        cost = instance.costs[i][chore]
        if cost > w_minp:
            violations.append(CheckViolation(
                kind="single_chore_bound", round=state.round, agent=i,
                detail=f"V_{i}(b_{chore}) = {cost} > w_minp = {w_minp}",
            ))
    return violations


def _interval_cost(instance: Instance, agent: int, lo: int, hi: int) -> Fraction:
    return sum(instance.costs[agent][lo:hi + 1], Fraction(0))


def knife_sweep(state: KnifeState, instance: Instance) -> tuple[tuple[int, int], int]:
    """Grow one maximal bag leftward from the pointer and hand it out.

    Extends the interval while any remaining copy can afford the extension
    at the non-strict 5*w_minp threshold, assigns it to the lowest-index
    affording agent, decrements that agent's copy count, and moves the
    pointer past the bag.
    """
    threshold = THRESHOLD_FACTOR * instance.entitlements.weights[state.minp]
    holders = [i for i, c in state.copies.items() if c > 0]
    lo = hi = state.s - 1
    costs = {i: _interval_cost(instance, i, lo, hi) for i in holders}
    while lo > 0:
        extended = {i: costs[i] + instance.costs[i][lo - 1] for i in holders}
        if not any(c <= threshold for c in extended.values()):
            break
        lo -= 1
        costs = extended
    affordable = sorted(i for i in holders if costs[i] <= threshold)
    if not affordable:
        raise NoAffordableAgent(
            f"no copy affords chore interval [{lo}, {hi}] at threshold {threshold}"
        )
    recipient = affordable[0]
    state.copies[recipient] -= 1
    state.s = lo
    state.interval = (lo - 1, lo - 1) if lo > 0 else (0, 0)
    return (lo, hi), recipient


def run_layered(instance: Instance,
                minp_variant: MinpVariant = "prose-largest"
                ) -> tuple[Assignment, KnifeTrace]:
    """Run the layered moving knife on a prepared instance.

    The instance must be in the sorted-chores setting with
    entitlement-divisible weights and cost rows normalized so WMMS_i = w_i.
    The first two preconditions are checked here; the third is enforced
    indirectly by the runtime safety measures.
    """
    n, m = instance.n, instance.m
    weights = instance.entitlements.weights
    for row in instance.costs:
        if any(row[j] > row[j + 1] for j in range(m - 1)):
            raise PreconditionViolation("cost rows must be sorted ascending")
    if not is_entitlement_divisible(instance.entitlements):
        raise PreconditionViolation("pairwise weight ratios must be integral")

    trace = KnifeTrace()
    state = KnifeState(
        s=m, dead=set(), in_progress={n - 1}, queued=set(range(n - 1)),
        copies={}, interval=(m - 1, m - 1), minp=n - 1, round=0,
    )
    bundles: list[set[int]] = [set() for _ in range(n)]

    def fail(check: SafetyCheck, message: str) -> SafetyViolation:
        return SafetyViolation(message, check=check, trace=trace)

    while state.s > 0:
        state.round += 1
        if not state.in_progress:
            raise SafetyViolation(
                "no agents left in progress with chores remaining", trace=trace
            )
        state.minp = min(state.in_progress)
        trace.add(RoundStart(
            round=state.round, minp=state.minp, dead=tuple(sorted(state.dead)),
            in_progress=tuple(sorted(state.in_progress)),
            queued=tuple(sorted(state.queued)), s=state.s,
        ))

        lhs1 = sum((weights[i] for i in state.in_progress), Fraction(0))
        rhs1 = sum((weights[i] for i in state.dead), Fraction(0))
        check1 = SafetyCheck(state.round, "weight_balance", lhs1, rhs1, lhs1 >= rhs1)
        trace.add(check1)
        if not check1.ok:
            raise fail(check1, "weight balance failed at round start")

        lhs2 = Fraction(m - state.s)
        rhs2 = sum(weights[state.minp + 1:], Fraction(0)) / weights[state.minp]
        check2 = SafetyCheck(state.round, "assigned_count", lhs2, rhs2, lhs2 >= rhs2)
        trace.add(check2)
        if not check2.ok:
            raise fail(check2, "assigned-count measure failed at round start")

        state.copies = build_copy_multiset(
            sorted(state.in_progress), weights, state.minp
        )
        state.interval = (state.s - 1, state.s - 1)
        while sum(state.copies.values()) > 0 and state.s > 0:
            (lo, hi), recipient = knife_sweep(state, instance)
            bundles[recipient].update(range(lo, hi + 1))
            trace.add(BagAssigned(
                round=state.round, agent=recipient, lo=lo, hi=hi,
                cost=_interval_cost(instance, recipient, lo, hi),
            ))

        minp_prime, final = compute_minp_prime(
            weights, state.minp, state.dead, state.in_progress, minp_variant
        )
        trace.add(RoundEnd(round=state.round, next_minp=minp_prime, final=final))
        state.dead |= state.in_progress
        state.in_progress = set(range(minp_prime, state.minp))
        state.queued = set(range(minp_prime))

    assignment = Assignment.from_lists(bundles, m)
    for i in range(n):
        total = instance.agent_cost(i, assignment.bundles[i])
        if total > PER_AGENT_FACTOR * weights[i]:
            raise SafetyViolation(
                f"agent {i} cost {total} exceeds {PER_AGENT_FACTOR}*w_i", trace=trace
            )
    return assignment, trace


# ---------------------------------------------------------------------------
# trace replay checks

@dataclass(frozen=True)
class RoundRecord:
    """One round reconstructed from a trace."""

    round: int
    minp: int
    in_progress: tuple[int, ...]
    s_start: int
    s_end: int
    bags: tuple[BagAssigned, ...]
    copies: dict[int, int]


def replay_rounds(trace: KnifeTrace, instance: Instance) -> list[RoundRecord]:
    weights = instance.entitlements.weights
    records = []
    current: Optional[RoundStart] = None
    bags: list[BagAssigned] = []
    for event in trace.events + [None]:
        if isinstance(event, RoundStart) or event is None:
            if current is not None:
                s_end = bags[-1].lo if bags else current.s
                records.append(RoundRecord(
                    round=current.round, minp=current.minp,
                    in_progress=current.in_progress, s_start=current.s,
                    s_end=s_end, bags=tuple(bags),
                    copies=build_copy_multiset(
                        current.in_progress, weights, current.minp
                    ),
                ))
            if event is not None:
                current = event
                bags = []
        elif isinstance(event, BagAssigned):
            bags.append(event)
    return records


def lemma3_trace_check(trace: KnifeTrace, instance: Instance) -> list[CheckViolation]:
    """Replay every round start through the single-chore bound check."""
    violations = []
    for record in replay_rounds(trace, instance):
        state = KnifeState(
            s=record.s_start, dead=set(), in_progress=set(record.in_progress),
            queued=set(), copies={}, interval=(0, 0), minp=record.minp,
            round=record.round,
        )
        violations.extend(lemma3_bound_check(state, instance))
    return violations


def lemma4_check(trace: KnifeTrace, instance: Instance) -> list[CheckViolation]:
    """Check the half-multiset property the c/2 removal argument relies on.

    In every round that did not exhaust the chores, any agent holding a copy
    after the first c/2 bag removals must price each of those bags at no
    less than 4*w_minp. Rounds that assigned everything are vacuously fine.
    """
    violations = []
    weights = instance.entitlements.weights
    floor_factor = THRESHOLD_FACTOR - 1
    for record in replay_rounds(trace, instance):
        if record.s_end == 0:
            continue  # round exhausted the chores: escape clause
        c = sum(record.copies.values())
        half = c // 2
        if len(record.bags) < half:
            continue  # cannot happen in valid traces: round ended early
        remaining = dict(record.copies)
        for bag in record.bags[:half]:
            remaining[bag.agent] -= 1
        bound = floor_factor * weights[record.minp]
        for agent, count in remaining.items():
            if count <= 0:
                continue
            for bag in record.bags[:half]:
                cost = _interval_cost(instance, agent, bag.lo, bag.hi)
                if cost < bound:
                    violations.append(CheckViolation(
                        kind="undersized_bag", round=record.round, agent=agent,
                        detail=(
                            f"bag [{bag.lo},{bag.hi}] costs {cost} < "
                            f"{floor_factor}*w_minp = {bound} for surviving agent"
                        ),
                    ))
    return violations


def maximality_check(trace: KnifeTrace, instance: Instance) -> list[CheckViolation]:
    """No copy present at sweep time could afford one more chore to the left."""
    violations = []
    weights = instance.entitlements.weights
    for record in replay_rounds(trace, instance):
        threshold = THRESHOLD_FACTOR * weights[record.minp]
        remaining = dict(record.copies)
        for bag in record.bags:
            if bag.lo > 0:
                for agent, count in remaining.items():
                    if count <= 0:
                        continue
                    cost = _interval_cost(instance, agent, bag.lo - 1, bag.hi)
                    if cost <= threshold:
                        violations.append(CheckViolation(
                            kind="non_maximal_sweep", round=record.round,
                            agent=agent,
                            detail=(
                                f"agent {agent} could afford [{bag.lo - 1},"
                                f"{bag.hi}] at {cost} <= {threshold}"
                            ),
                        ))
            remaining[bag.agent] -= 1
    return violations


# ---------------------------------------------------------------------------
# end-to-end pipeline

@dataclass(frozen=True)
class SolveResult:
    assignment: Assignment
    report: RatioReport
    trace: KnifeTrace
    profile: WmmsProfile
    sorted_reduction: SortedReduction
    divisible: DivisibleReduction
    normalized: Instance
    sorted_assignment: Assignment


def solve(instance: Instance, profile: Optional[WmmsProfile] = None,
          minp_variant: MinpVariant = "prose-largest",
          oracle_cap: int = 2**24) -> SolveResult:
    """Full pipeline: sort, round entitlements, normalize, run, map back.

    When no profile is given, both the original and the rounded-weight WMMS
    profiles come from the exact oracle and the returned report's max ratio
    is guaranteed to be at most 20. A supplied profile stands in for the
    oracle on both legs, so every guarantee is then relative to it: the
    rounded-weight values it cannot know are covered by normalizing half as
    hard (entitlement rounding inflates each value by at most 2), which
    keeps the run's safety measures valid and the end-to-end factor at 20.
    """
    if profile is None:
        profile = wmms_profile(instance, cap=oracle_cap)
        oracle_backed = True
    else:
        oracle_backed = False

    reduction = to_sorted(instance)
    divisible = round_entitlements(reduction.sorted_instance)
    rounded = divisible.rounded_instance
    if oracle_backed:
        rounded_profile = wmms_profile(rounded, cap=oracle_cap)
    else:
        rounded_profile = WmmsProfile(
            values=tuple(2 * v for v in profile.values),
            witnesses=profile.witnesses,
        )
    normalized = normalize(rounded, rounded_profile)
    sorted_assignment, trace = run_layered(normalized, minp_variant=minp_variant)
    assignment = map_back(sorted_assignment, reduction, instance)
    report = ratio_report(instance, assignment, profile)
    return SolveResult(
        assignment=assignment, report=report, trace=trace, profile=profile,
        sorted_reduction=reduction, divisible=divisible, normalized=normalized,
        sorted_assignment=sorted_assignment,
    )
