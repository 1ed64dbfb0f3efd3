"""Bound composition trees and the searches over the entitlement simplex.

Values here are binary floats: the targets are constants like (sqrt(3)+1)/2
and roots of transcendental equations, checked to 1e-12 residuals. Exact
rationals stop at the solver; they have no business in this module.

Every bound carries a derivation tree whose leaves are known constants and
whose internal nodes are the two reduction rules (grouping with
representatives, and symmetric scaling). Re-evaluating a tree bottom-up
reproduces the stored value to 1e-12; tests enforce this.

The search families:

* ``paper3`` / ``paper4``: the literal two- and three-bound formulas used
  in the closed-form three- and four-agent analyses;
* ``exhaustive``: every set partition with every injective representative
  assignment (children recurse); pruning keeps this fast through n = 10;
* ``heuristic``: contiguous groups over the sorted weights, representative
  = group maximum, plus the odd/even pairing pattern - cheaper but visibly
  weaker, kept for comparison runs;
* ``auto``: exhaustive up to n = 10, heuristic above.

Two-agent vectors always score the flat two-agent constant: the search does
not refine them further. The hot batch evaluations run on the selected
kernel (compiled or pure-Python twin); this module mirrors the same
semantics while building trees, and tests pin the two against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

import numpy as np

from ..errors import InvalidGrouping
from . import _pykernel

K2 = _pykernel.K2
FAMILY_CODES = {
    "auto": 0,
    "exhaustive": 1,
    "heuristic": 2,
    "paper3": 3,
    "paper4": 4,
}
DEFAULT_DEPTH = 3
MEMO_DIGITS = 12


def _kernel():
    from . import kernel

    return kernel


def _as_floats(weights: Sequence) -> list[float]:
    out = []
    for x in weights:
        if isinstance(x, str):
            x = Fraction(x)
        out.append(float(x))
    if not out or min(out) <= 0.0:
        raise ValueError("weights must be strictly positive")
    total = sum(out)
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"weights must sum to 1, got {total}")
    return sorted(out)


# ---------------------------------------------------------------------------
# derivation trees

@dataclass(frozen=True)
class BaseCase:
    name: str
    constant: float


@dataclass(frozen=True)
class Grouping:
    """Partition of agents into nonempty groups plus distinct representatives.

    The representative of group i need not belong to group i.
    """

    groups: tuple[tuple[int, ...], ...]
    representatives: tuple[int, ...]

    def validate(self, n: int) -> None:
        if len(self.groups) != len(self.representatives):
            raise InvalidGrouping("one representative per group is required")
        seen: set[int] = set()
        for group in self.groups:
            if not group:
                raise InvalidGrouping("groups must be nonempty")
            for agent in group:
                if agent in seen or not 0 <= agent < n:
                    raise InvalidGrouping(f"agent {agent} misplaced")
                seen.add(agent)
        if len(seen) != n:
            raise InvalidGrouping("groups must cover every agent")
        reps = set(self.representatives)
        if len(reps) != len(self.representatives) or not all(
            0 <= r < n for r in reps
        ):
            raise InvalidGrouping("representatives must be distinct agents")


@dataclass(frozen=True)
class Red1:
    grouping: Grouping
    alpha: float
    child: "BoundResult"


@dataclass(frozen=True)
class Red2:
    ratio: float
    symmetric_constant: float


Derivation = Union[BaseCase, Red1, Red2]


@dataclass(frozen=True)
class BoundResult:
    value: float
    derivation: Derivation


def evaluate_derivation(node: Derivation) -> float:
    """Recompute a derivation bottom-up; must match the stored value."""
    if isinstance(node, BaseCase):
        return node.constant
    if isinstance(node, Red2):
        return node.ratio * node.symmetric_constant
    if isinstance(node, Red1):
        return node.alpha * evaluate_derivation(node.child.derivation)
    raise TypeError(f"unknown derivation node {node!r}")


def format_derivation(node: Derivation, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(node, BaseCase):
        return f"{pad}base[{node.name}] = {node.constant:.6f}"
    if isinstance(node, Red2):
        return (f"{pad}symmetric-scaling: ratio {node.ratio:.6f} x "
                f"{node.symmetric_constant:.6f}")
    if isinstance(node, Red1):
        groups = ", ".join(
            "{" + ",".join(str(a + 1) for a in g) + "}" for g in node.grouping.groups
        )
        reps = ",".join(str(r + 1) for r in node.grouping.representatives)
        head = (f"{pad}grouping {groups} reps ({reps}): alpha {node.alpha:.6f} x "
                f"child {node.child.value:.6f}")
        return head + "\n" + format_derivation(node.child.derivation, indent + 1)
    raise TypeError(f"unknown derivation node {node!r}")


# ---------------------------------------------------------------------------
# single bounds

def base_f(weights: Sequence) -> Optional[BoundResult]:
    """Known constant for the vector, or None when no base case applies."""
    w = _as_floats(weights)
    n = len(w)
    if n == 1:
        return BoundResult(1.0, BaseCase("single_agent", 1.0))
    if n == 2:
        if w[0] == w[1]:
            return BoundResult(1.0, BaseCase("two_agent_equal", 1.0))
        return BoundResult(K2, BaseCase("two_agent", K2))
    if w[0] == w[-1]:
        constant = _pykernel.sym_const(n)
        name = "uniform_3" if n == 3 else ("uniform_4_7" if n <= 7 else "uniform_8_plus")
        return BoundResult(constant, BaseCase(name, constant))
    return None


def red2_bound(weights: Sequence) -> BoundResult:
    """(max weight / min weight) times the symmetric constant for n agents."""
    w = _as_floats(weights)
    if len(w) < 3:
        raise ValueError("symmetric scaling is used for n >= 3 only")
    ratio = w[-1] / w[0]
    constant = _pykernel.sym_const(len(w))
    return BoundResult(ratio * constant, Red2(ratio=ratio, symmetric_constant=constant))


def red1_bound(weights: Sequence, grouping: Grouping,
               child_bound_fn: Callable[[list[float]], BoundResult]) -> BoundResult:
    """Grouping reduction: alpha times the child bound on the representative
    vector normalized by beta = 1 / (sum of representative weights)."""
    w = _as_floats(weights)
    n = len(w)
    grouping.validate(n)
    rep_total = sum(w[r] for r in grouping.representatives)
    alpha = max(
        sum(w[a] for a in group) / w[rep]
        for group, rep in zip(grouping.groups, grouping.representatives)
    )
    if alpha < 1.0 - 1e-9:
        raise InvalidGrouping(
            f"alpha = {alpha} < 1 cannot happen for weights summing to 1"
        )
    child = child_bound_fn([w[r] / rep_total for r in grouping.representatives])
    return BoundResult(alpha * child.value,
                       Red1(grouping=grouping, alpha=alpha, child=child))


# ---------------------------------------------------------------------------
# the family search, tree-building mirror of the kernels

@dataclass(frozen=True)
class SearchConfig:
    family: str = "auto"
    depth: int = DEFAULT_DEPTH


def _lpt_with_partition(w: list[float], rep_w: list[float]):
    """Greedy heaviest-first placement and the partition it builds."""
    n = len(w)
    g = len(rep_w)
    loads = [0.0] * g
    counts = [0] * g
    assign = [0] * n
    for pos, agent in enumerate(range(n - 1, -1, -1)):
        empties = [j for j in range(g) if counts[j] == 0]
        candidates = empties if len(empties) >= n - pos else range(g)
        j = min(candidates, key=lambda t: (loads[t] + w[agent]) / rep_w[t])
        loads[j] += w[agent]
        counts[j] += 1
        assign[agent] = j
    return max(loads[j] / rep_w[j] for j in range(g)), assign


def _min_alpha_with_partition(w: list[float], reps: list[int], cutoff: float):
    """Like the kernel's partition search but recovering the argmin groups."""
    n = len(w)
    g = len(reps)
    rep_w = [w[r] for r in reps]
    order = sorted(range(n), key=lambda i: -w[i])
    loads = [0.0] * g
    counts = [0] * g
    assign = [0] * n
    lpt_alpha, lpt_assign = _lpt_with_partition(w, rep_w)
    if lpt_alpha < cutoff:
        best: list = [lpt_alpha, lpt_assign]
    else:
        best = [cutoff, None]

    def place(pos: int, running: float) -> None:
        if running >= best[0]:
            return
        empty = sum(1 for c in counts if c == 0)
        if empty > n - pos:
            return
        if pos == n:
            if empty == 0:
                best[0] = running
                best[1] = assign.copy()
            return
        agent = order[pos]
        for j in range(g):
            loads[j] += w[agent]
            counts[j] += 1
            assign[agent] = j
            ratio = loads[j] / rep_w[j]
            place(pos + 1, ratio if ratio > running else running)
            loads[j] -= w[agent]
            counts[j] -= 1

    place(0, 0.0)
    if best[1] is None:
        return None, None
    groups: list[list[int]] = [[] for _ in range(g)]
    for agent, j in enumerate(best[1]):
        groups[j].append(agent)
    return best[0], tuple(tuple(group) for group in groups)


def _paper3_result(w: list[float]) -> BoundResult:
    two_agent = BoundResult(K2, BaseCase("two_agent", K2))
    b1 = red1_bound(w, Grouping(groups=((1,), (0, 2)), representatives=(1, 2)),
                    lambda _: two_agent)
    b2 = red2_bound(w)
    return b1 if b1.value <= b2.value else b2


def _paper4_result(w: list[float]) -> BoundResult:
    one_agent = BoundResult(1.0, BaseCase("single_agent", 1.0))
    b1 = red1_bound(w, Grouping(groups=((0, 1, 2, 3),), representatives=(3,)),
                    lambda _: one_agent)
    pair_child_value = min(w[3] / w[2], K2)
    pair_child = BoundResult(
        pair_child_value,
        Red2(ratio=w[3] / w[2], symmetric_constant=1.0)
        if w[3] / w[2] < K2 else BaseCase("two_agent", K2),
    )
    b2 = red1_bound(w, Grouping(groups=((0, 2), (1, 3)), representatives=(2, 3)),
                    lambda _: pair_child)
    b3 = red2_bound(w)
    return min((b1, b2, b3), key=lambda r: r.value)


def best_bound(weights: Sequence, config: Optional[SearchConfig] = None,
               _memo: Optional[dict] = None) -> BoundResult:
    """Minimum over the configured bound family, with its derivation tree.

    Mirrors the kernel evaluation exactly (tests pin the values against each
    other); recursion is capped by ``config.depth`` and memoized on the
    weight vector rounded to 12 digits.
    """
    config = config or SearchConfig()
    w = _as_floats(weights)
    n = len(w)
    family = config.family
    if family == "auto":
        family = "exhaustive" if n <= _pykernel.EXHAUSTIVE_MAX_N else "heuristic"

    if n <= 2:
        result = base_f(w)
        assert result is not None
        return result
    if family == "paper3":
        if n != 3:
            raise ValueError("paper3 family is defined for n = 3 only")
        return _paper3_result(w)
    if family == "paper4":
        if n != 4:
            raise ValueError("paper4 family is defined for n = 4 only")
        return _paper4_result(w)
    if family not in ("exhaustive", "heuristic"):
        raise ValueError(f"unknown family {config.family!r}")

    memo = _memo if _memo is not None else {}
    key = (tuple(round(x, MEMO_DIGITS) for x in w), family, config.depth)
    if key in memo:
        return memo[key]

    candidates: list[BoundResult] = []
    base = base_f(w)
    if base is not None:
        candidates.append(base)
    candidates.append(red2_bound(w))
    best = min(candidates, key=lambda r: r.value)

    def child_fn(child_w: list[float]) -> BoundResult:
        return best_bound(child_w, SearchConfig("auto", config.depth - 1), memo)

    if config.depth > 0 and family == "exhaustive":
        for mask in range(1, (1 << n) - 1):
            reps = [i for i in range(n) if mask >> i & 1]
            rep_total = sum(w[r] for r in reps)
            alpha_lb = max(1.0 / rep_total, w[n - 1] / w[reps[-1]])
            if alpha_lb >= best.value:
                continue
            child = child_fn([w[r] / rep_total for r in reps])
            if alpha_lb * child.value >= best.value:
                continue
            alpha, groups = _min_alpha_with_partition(
                w, reps, best.value / child.value
            )
            if groups is None:
                continue
            value = alpha * child.value
            if value < best.value:
                grouping = Grouping(groups=groups, representatives=tuple(reps))
                best = BoundResult(value, Red1(grouping, alpha, child))
    elif config.depth > 0 and family == "heuristic":
        full = (1 << (n - 1)) - 1
        for mask in range(1 << (n - 1)):
            if mask == full:
                continue
            groups = []
            start = 0
            for i in range(n):
                if i == n - 1 or mask >> i & 1:
                    groups.append(tuple(range(start, i + 1)))
                    start = i + 1
            reps = tuple(group[-1] for group in groups)
            alpha = max(sum(w[a] for a in g) / w[r] for g, r in zip(groups, reps))
            if alpha >= best.value:
                continue
            rep_total = sum(w[r] for r in reps)
            child = child_fn([w[r] / rep_total for r in reps])
            value = alpha * child.value
            if value < best.value:
                grouping = Grouping(groups=tuple(groups), representatives=reps)
                best = BoundResult(value, Red1(grouping, alpha, child))
        if n >= 4:
            hi_group = tuple(sorted(range(n - 1, -1, -2)))
            lo_group = tuple(i for i in range(n) if i not in hi_group)
            groups = (lo_group, hi_group)
            reps = (n - 2, n - 1)
            alpha = max(sum(w[a] for a in g) / w[r] for g, r in zip(groups, reps))
            if alpha < best.value:
                rep_total = w[n - 2] + w[n - 1]
                child = base_f([w[n - 2] / rep_total, w[n - 1] / rep_total])
                assert child is not None
                value = alpha * child.value
                if value < best.value:
                    grouping = Grouping(groups=groups, representatives=reps)
                    best = BoundResult(value, Red1(grouping, alpha, child))

    memo[key] = best
    return best


# ---------------------------------------------------------------------------
# closed-form constants

def theorem3_constant() -> float:
    """Positive root of 13c^2 - 13kc - 15k = 0 with k the two-agent constant."""
    s = math.sqrt(3.0)
    return (13.0 + 13.0 * s + math.sqrt(2236.0 + 1898.0 * s)) / 52.0


def _theorem4_lhs(x: float) -> float:
    s = math.sqrt(3.0) + 1.0
    return 1.0 / x + 20.0 / (17.0 * x * x) + 40.0 / (
        17.0 * x * x * (2.0 * x / s - 1.0)
    )


def theorem4_constant() -> float:
    """Unique x > (sqrt(3)+1)/2 with 1/x + 20/(17x^2) + 40/(17x^2(2x/(sqrt(3)+1)-1)) = 1.

    The left side is strictly decreasing past the pole, so plain bisection
    pins the root to full double precision.
    """
    lo, hi = K2 * (1.0 + 1e-9), 16.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _theorem4_lhs(mid) > 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def logn_baseline(n: int) -> float:
    """The previously best general guarantee, log2(n) + 1."""
    if n < 2:
        raise ValueError("baseline is defined for n >= 2")
    return math.log2(n) + 1.0


# ---------------------------------------------------------------------------
# simplex searches

@dataclass(frozen=True)
class SimplexMaxResult:
    value: float
    weights: tuple[float, ...]
    n: int
    method: str
    family: str
    samples: int
    seed: Optional[int]


def sorted_simplex_grid(n: int, step: float) -> np.ndarray:
    """All ascending positive grid points with the given step, as an array.

    Entries are integer multiples of ``step`` summing to exactly the grid
    resolution; the caller gets floats summing to 1 up to rounding.
    """
    units = round(1.0 / step)
    if units < n or abs(units * step - 1.0) > 1e-9:
        raise ValueError("step must divide 1 and leave room for n agents")
    rows: list[list[int]] = []

    def build(prefix: list[int], lo: int, remaining: int) -> None:
        slot = len(prefix)
        if slot == n - 1:
            if remaining >= lo:
                rows.append(prefix + [remaining])
            return
        # Keep entries ascending: the remaining slots each need >= value.
        for value in range(lo, remaining // (n - slot) + 1):
            build(prefix + [value], value, remaining - value)

    build([], 1, units)
    return np.array(rows, dtype=np.float64) * step


def _hill_climb(start: np.ndarray, family_code: int, depth: int,
                rng: np.random.Generator, iters: int, sigma: float,
                decay: float, eval_fn) -> tuple[float, np.ndarray]:
    w = np.sort(np.asarray(start, dtype=np.float64))
    best = eval_fn(w, family_code, depth, 0.0)
    n = len(w)
    for _ in range(iters):
        proposal = w * np.exp(sigma * rng.standard_normal(n))
        proposal = np.sort(proposal / proposal.sum())
        value = eval_fn(proposal, family_code, depth, best)
        if value > best:
            best = value
            w = proposal
        sigma *= decay
    return best, w


def simplex_max(n: int, method: str = "sample", *, step: float = 1e-3,
                count: int = 10**6, seed: int = 0, restarts: int = 20,
                family: str = "auto", depth: int = DEFAULT_DEPTH,
                refine_top: int = 100, refine_iters: int = 2000,
                chunk: int = 20000) -> SimplexMaxResult:
    """Maximize the family bound over the open simplex interior.

    * ``grid``: exact sweep of the ascending grid with the given step;
    * ``sample``: uniform Dirichlet(1) draws, then hill-climb refinement
      from the best per-chunk survivors;
    * ``local``: seeded random restarts of the hill climber alone.

    Deterministic for a fixed seed and parameter set.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    kernel = _kernel()
    family_code = FAMILY_CODES[family]
    eval_fn = kernel.eval_bound

    if method == "grid":
        grid = sorted_simplex_grid(n, step)
        best = 0.0
        best_row = None
        for start in range(0, len(grid), chunk):
            block = grid[start:start + chunk]
            value, row = kernel.batch_max(block, family_code, depth, best)
            if row >= 0:
                best = value
                best_row = block[row]
        assert best_row is not None
        return SimplexMaxResult(
            value=best, weights=tuple(np.sort(best_row)), n=n, method=method,
            family=family, samples=len(grid), seed=None,
        )

    rng = np.random.default_rng(seed)
    if method == "sample":
        best = 0.0
        champions: list[tuple[float, np.ndarray]] = []
        remaining = count
        while remaining > 0:
            block = rng.dirichlet(np.ones(n), size=min(chunk, remaining))
            remaining -= len(block)
            # Chunk-local cap keeps one champion per chunk for refinement.
            value, row = kernel.batch_max(block, family_code, depth,
                                          best * 0.98)
            if row >= 0:
                champions.append((value, np.sort(block[row])))
                if value > best:
                    best = value
        champions.sort(key=lambda item: -item[0])
        best_w = champions[0][1]
        for value, start in champions[:refine_top]:
            refined, refined_w = _hill_climb(
                start, family_code, depth, rng, refine_iters, 0.15, 0.998,
                eval_fn,
            )
            if refined > best:
                best = refined
                best_w = refined_w
        return SimplexMaxResult(
            value=best, weights=tuple(best_w), n=n, method=method,
            family=family, samples=count, seed=seed,
        )

    if method == "local":
        best = 0.0
        best_w = None
        for _ in range(restarts):
            start = rng.dirichlet(np.ones(n))
            value, w = _hill_climb(start, family_code, depth, rng,
                                   refine_iters, 0.25, 0.998, eval_fn)
            if value > best:
                best = value
                best_w = w
        assert best_w is not None
        return SimplexMaxResult(
            value=best, weights=tuple(best_w), n=n, method=method,
            family=family, samples=restarts, seed=seed,
        )

    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# three-agent heatmap data

HEATMAP_RULES = ("red1_two_agent", "red2_symmetric")


@dataclass(frozen=True)
class HeatmapRow:
    w1: float
    w2: float
    w3: float
    value: float
    dominating_rule: str


def heatmap_grid(step: float) -> list[HeatmapRow]:
    """Three-agent grid of the two closed-form bounds and which one binds.

    Points are ascending triples (w1 <= w2 <= w3); the binding rule is the
    one attaining the minimum, the symmetric rule on exact ties.
    """
    if not 0.0 < step < 1.0:
        raise ValueError("step must be in (0, 1)")
    rows = []
    for point in sorted_simplex_grid(3, step):
        w1, w2, w3 = point
        two_agent = K2 * (w1 + w3) / w3
        symmetric = (15.0 / 13.0) * w3 / w1
        if two_agent < symmetric:
            value, rule = two_agent, "red1_two_agent"
        else:
            value, rule = symmetric, "red2_symmetric"
        rows.append(HeatmapRow(w1=w1, w2=w2, w3=w3, value=value,
                               dominating_rule=rule))
    return rows
