"""Pure-Python evaluation kernel for entitlement-only bound search.

This is the fallback twin of the compiled kernel in ``_speedups``; both
implement exactly the same candidate families and pruning rules and must
agree to float precision. The compiled module is preferred at import time
by :mod:`choreknife.bounds`.

A call evaluates the best (smallest) provable approximation factor for one
weight vector by taking the minimum over:

* base constants (single agent, two agents, uniform vectors),
* the symmetric-scaling bound (max weight / min weight) * uniform constant,
* grouping reductions: partition the agents, pick distinct representative
  agents, pay alpha = max_i (group i weight) / (representative i weight),
  and recurse on the normalized representative vector.

Two-agent vectors are valued at the flat two-agent constant; the search
never refines them further.

The ``cap`` argument implements early abandonment for max-hunting: the
return value v always satisfies true <= v, and either v > cap (in which
case v is exact) or v <= cap (the caller only learns the vector cannot beat
cap). Pass cap <= 1 for an exact evaluation.
"""

from __future__ import annotations

import math

K2 = (math.sqrt(3.0) + 1.0) / 2.0
SYM3 = 15.0 / 13.0
SYM47 = 20.0 / 17.0
SYM8 = 13.0 / 11.0

FAMILY_AUTO = 0
FAMILY_EXHAUSTIVE = 1
FAMILY_HEURISTIC = 2
FAMILY_PAPER3 = 3
FAMILY_PAPER4 = 4

EXHAUSTIVE_MAX_N = 10
INF = math.inf


def sym_const(n: int) -> float:
    """Best known symmetric-setting constant for n >= 3 agents."""
    if n == 3:
        return SYM3
    if n <= 7:
        return SYM47
    return SYM8


def base_case(w: list) -> float:
    """Base constant for the vector, or +inf when no base case applies.

    ``w`` must be sorted ascending. Uniformity is exact float equality; the
    samplers never produce ties, grids may.
    """
    n = len(w)
    if n == 1:
        return 1.0
    if n == 2:
        return 1.0 if w[0] == w[1] else K2
    if w[0] == w[n - 1]:
        return sym_const(n)
    return INF


def _paper3(w: list) -> float:
    return min(K2 * (w[0] + w[2]) / w[2], SYM3 * w[2] / w[0])


def _paper4(w: list) -> float:
    b1 = 1.0 / w[3]
    b2 = max((w[0] + w[2]) / w[2], (w[1] + w[3]) / w[3]) * min(w[3] / w[2], K2)
    b3 = SYM47 * w[3] / w[0]
    return min(b1, b2, b3)


def _lpt_alpha(w: list, rep_w: list) -> float:
    """Greedy heaviest-first placement; a valid (not necessarily optimal)
    max load/representative ratio for the given representative weights."""
    n = len(w)
    g = len(rep_w)
    loads = [0.0] * g
    counts = [0] * g
    for pos, agent in enumerate(range(n - 1, -1, -1)):
        empties = [j for j in range(g) if counts[j] == 0]
        candidates = empties if len(empties) >= n - pos else range(g)
        j = min(candidates, key=lambda t: (loads[t] + w[agent]) / rep_w[t])
        loads[j] += w[agent]
        counts[j] += 1
    return max(loads[j] / rep_w[j] for j in range(g))


def _min_alpha(w: list, reps: list, best_bound_value: float) -> float:
    """Minimum over partitions of max group-weight / representative-weight.

    Groups are labeled by the representatives in ``reps``; every agent must
    land in exactly one (nonempty) group. Branches whose running ratio
    already reaches the incumbent are cut; the incumbent starts at the
    better of the cutoff and a greedy placement, which is itself a valid
    candidate, so the return value is exact whenever it beats the cutoff.
    """
    n = len(w)
    g = len(reps)
    rep_w = [w[r] for r in reps]
    # Heavier agents first: their placement fixes large ratios early.
    order = sorted(range(n), key=lambda i: -w[i])
    loads = [0.0] * g
    counts = [0] * g
    best = [min(best_bound_value, _lpt_alpha(w, rep_w))]

    def place(pos: int, running: float) -> None:
        if running >= best[0]:
            return
        remaining = n - pos
        empty = sum(1 for c in counts if c == 0)
        if empty > remaining:
            return
        if pos == n:
            if empty == 0:
                best[0] = running
            return
        agent = order[pos]
        for j in range(g):
            loads[j] += w[agent]
            counts[j] += 1
            ratio = loads[j] / rep_w[j]
            place(pos + 1, ratio if ratio > running else running)
            loads[j] -= w[agent]
            counts[j] -= 1

    place(0, 0.0)
    return best[0]


def _subsets(n: int):
    """Nonempty proper subsets of range(n) as index lists, by bitmask."""
    for mask in range(1, (1 << n) - 1):
        yield [i for i in range(n) if mask >> i & 1]


def _eval(w: list, family: int, depth: int, cap: float) -> float:
    n = len(w)
    if family == FAMILY_AUTO:
        family = FAMILY_EXHAUSTIVE if n <= EXHAUSTIVE_MAX_N else FAMILY_HEURISTIC
    if n <= 2:
        return base_case(w)
    if family == FAMILY_PAPER3:
        if n != 3:
            raise ValueError("paper3 family is defined for n = 3 only")
        return _paper3(w)
    if family == FAMILY_PAPER4:
        if n != 4:
            raise ValueError("paper4 family is defined for n = 4 only")
        return _paper4(w)

    best = base_case(w)
    red2 = (w[n - 1] / w[0]) * sym_const(n)
    if red2 < best:
        best = red2
    if depth <= 0 or best <= cap:
        return best

    if family == FAMILY_EXHAUSTIVE:
        # Cheap openers: heavy representative sets with greedy placement.
        # Valid family members, so they may lower `best` (and trigger
        # abandonment) before the full scan tightens anything.
        for g in (1, 2, 3):
            if g > n - 1:
                break
            reps = list(range(n - g, n))
            rep_total = sum(w[r] for r in reps)
            child = [w[r] / rep_total for r in reps]
            childval = _eval(child, FAMILY_AUTO, depth - 1, 0.0)
            value = _lpt_alpha(w, [w[r] for r in reps]) * childval
            if value < best:
                best = value
                if best <= cap:
                    return best
        # Children are evaluated exactly; only the caller-facing value may
        # be abandoned. A cap-derived child budget is unsound here because
        # alpha is not known until after the child value is.
        for reps in _subsets(n):
            rep_total = sum(w[r] for r in reps)
            # The heaviest agent sits in some group, so alpha >= w_max over
            # the heaviest representative weight; and alpha >= 1/rep_total.
            alpha_lb = max(1.0 / rep_total, w[n - 1] / w[reps[-1]])
            if alpha_lb >= best:
                continue
            child = [w[r] / rep_total for r in reps]
            childval = _eval(child, FAMILY_AUTO, depth - 1, 0.0)
            if alpha_lb * childval >= best:
                continue
            alpha = _min_alpha(w, reps, best / childval)
            value = alpha * childval
            if value < best:
                best = value
                if best <= cap:
                    return best
        return best

    if family == FAMILY_HEURISTIC:
        best = _heuristic(w, depth, best, cap)
        return best

    raise ValueError(f"unknown family {family}")


def _heuristic(w: list, depth: int, best: float, cap: float) -> float:
    """Contiguous groups over the sorted vector, representative = group max,
    plus the odd/even pairing pattern."""
    n = len(w)
    prefix = [0.0] * (n + 1)
    for i in range(n):
        prefix[i + 1] = prefix[i] + w[i]
    # A composition is a set of segment boundaries; right endpoints are the
    # representatives, so the child vector stays ascending.
    for mask in range(1 << (n - 1)):
        if mask == (1 << (n - 1)) - 1:
            continue  # all singletons: child equals the input vector
        alpha = 0.0
        reps = []
        start = 0
        for i in range(n):
            if i == n - 1 or mask >> i & 1:
                seg = prefix[i + 1] - prefix[start]
                ratio = seg / w[i]
                if ratio > alpha:
                    alpha = ratio
                reps.append(i)
                start = i + 1
        if alpha >= best:
            continue
        rep_total = sum(w[r] for r in reps)
        child = [w[r] / rep_total for r in reps]
        # alpha is known up front, so the child may run under the global
        # abandonment budget: an abandoned child forces value <= cap, which
        # abandons this whole vector in turn.
        childval = _eval(child, FAMILY_AUTO, depth - 1, cap / alpha)
        value = alpha * childval
        if value < best:
            best = value
            if best <= cap:
                return best
    if n >= 4:
        evens = list(range(0, n, 2))
        odds = list(range(1, n, 2))
        whole = sum(w)
        ge, go = (evens, odds) if n % 2 == 1 else (odds, evens)
        # ge holds index n-1, go holds index n-2.
        sum_hi = sum(w[i] for i in ge)
        alpha = max(sum_hi / w[n - 1], (whole - sum_hi) / w[n - 2])
        if alpha < best:
            rep_total = w[n - 2] + w[n - 1]
            child = [w[n - 2] / rep_total, w[n - 1] / rep_total]
            value = alpha * base_case(child)
            if value < best:
                best = value
    return best


def _check_family(family: int, n: int) -> None:
    if family not in (FAMILY_AUTO, FAMILY_EXHAUSTIVE, FAMILY_HEURISTIC,
                      FAMILY_PAPER3, FAMILY_PAPER4):
        raise ValueError(f"unknown family {family}")
    if family == FAMILY_PAPER3 and n != 3:
        raise ValueError("paper3 family is defined for n = 3 only")
    if family == FAMILY_PAPER4 and n != 4:
        raise ValueError("paper4 family is defined for n = 4 only")


def eval_bound(weights, family: int = FAMILY_AUTO, depth: int = 3,
               cap: float = 0.0) -> float:
    """Evaluate the bound for one weight vector (any order, must be > 0)."""
    w = sorted(float(x) for x in weights)
    if not w or w[0] <= 0.0:
        raise ValueError("weights must be strictly positive")
    _check_family(family, len(w))
    return _eval(w, family, depth, cap)


def batch_max(weights_2d, family: int = FAMILY_AUTO, depth: int = 3,
              running_max: float = 0.0):
    """Maximum bound over rows of a 2D array; returns (max, argmax_row_index).

    Rows whose value cannot exceed the running maximum are abandoned early.
    """
    best = running_max
    best_row = -1
    for idx in range(len(weights_2d)):
        value = eval_bound(weights_2d[idx], family, depth, cap=best)
        if value > best:
            best = value
            best_row = idx
    return best, best_row
