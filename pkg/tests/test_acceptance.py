"""Acceptance suite: one test per shipping criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s``. The table-reproduction
experiment (criterion 8) samples 10^6 weight vectors per agent count with
fixed seeds; the whole suite stays well inside its stated runtime budgets
on the compiled kernel. The billion-sample experiment behind the published
table is deliberately not reproduced; desk-scale tolerances account for it.

Criterion 6a is expected to fail and is marked xfail(strict): the
three-agent closed-form constant is 2.1122395940 (the unique positive root
of its defining quadratic, which criterion 6's own grid clause and the
crossing-point identity both confirm), while the stated target pins the
figure-table value 2.11222 to within 5e-6. The two are 2e-5 apart, so no
correct implementation can satisfy both; the constant keeps its defining
equation and the discrepancy stays visible here.
"""

import math
import time
from fractions import Fraction

import pytest
from click.testing import CliRunner

from choreknife.bounds import (
    heatmap_grid,
    kernel,
    simplex_max,
    theorem3_constant,
    theorem4_constant,
)
from choreknife.bounds.calculus import sorted_simplex_grid
from choreknife.cli import main as cli_main
from choreknife.gen import GenSpec, generate
from choreknife.knife import (
    BagAssigned,
    SafetyCheck,
    lemma3_trace_check,
    lemma4_check,
    solve,
)
from choreknife.model import Assignment
from choreknife.oracle import mms, wmms
from choreknife.reductions import (
    has_power_of_two_ratios,
    map_back,
    round_entitlements,
    to_sorted,
)

REFERENCE_TABLE = {3: 2.11222, 4: 2.52756, 5: 2.73205, 6: 3.04882, 7: 3.2842,
               8: 3.5134, 9: 3.72934, 10: 4.0352}


def report(criterion: str, ok: bool, detail: str) -> None:
    print(f"\n[acceptance] criterion {criterion}: "
          f"{'PASS' if ok else 'FAIL'} - {detail}")


def pool(count, start_seed, max_n, max_m, cost_max=9):
    for k in range(count):
        seed = start_seed + k
        yield generate(GenSpec(
            n=1 + seed % max_n,
            m=1 + (seed * 7) % max_m,
            weight_mode=("dirichlet_unit", "uniform", "power_of_two")[seed % 3],
            cost_mode=("iid_uniform_integer", "identical_agents",
                       "correlated")[seed % 3],
            cost_max=cost_max,
            seed=seed,
        ))


def test_criterion_1_oracle_soundness():
    t0 = time.time()
    checked = 0
    for inst in pool(500, 0, max_n=3, max_m=7):
        uniform = len(set(inst.entitlements.weights)) == 1
        for i in range(inst.n):
            direct = wmms(inst, i, strategy="direct")
            recursive = wmms(inst, i, strategy="recursive")
            assert direct == recursive, (inst, i)
            if uniform:
                assert recursive == mms(inst, i), (inst, i)
            checked += 1
    elapsed = time.time() - t0
    ok = elapsed < 60
    report("1", ok, f"{checked} agent values, strategies identical, "
                    f"uniform wmms == mms; {elapsed:.1f}s")
    assert ok


def test_criterion_2_sorted_chores_reduction():
    t0 = time.time()
    for seed, inst in enumerate(pool(200, 500, max_n=3, max_m=7)):
        red = to_sorted(inst)
        for i in range(inst.n):
            assert wmms(inst, i) == wmms(red.sorted_instance, i)
        if inst.m == 0:
            continue
        bundles = [[] for _ in range(inst.n)]
        for chore in range(inst.m):
            bundles[(chore * 5 + seed) % inst.n].append(chore)
        sorted_assignment = Assignment.from_lists(bundles, inst.m)
        mapped = map_back(sorted_assignment, red, inst)
        for i in range(inst.n):
            assert inst.agent_cost(i, mapped.bundles[i]) <= \
                red.sorted_instance.agent_cost(i, sorted_assignment.bundles[i])
    elapsed = time.time() - t0
    ok = elapsed < 60
    report("2", ok, f"200 instances: WMMS preserved exactly, map-back "
                    f"dominated per agent; {elapsed:.1f}s")
    assert ok


def test_criterion_3_entitlement_rounding():
    t0 = time.time()
    for inst in pool(200, 700, max_n=6, max_m=1):
        red = round_entitlements(inst)
        new = red.rounded_instance.entitlements
        old = inst.entitlements.weights
        assert has_power_of_two_ratios(new)
        for i in range(inst.n):
            for j in range(inst.n):
                assert new.weights[i] / new.weights[j] <= 2 * old[i] / old[j]
    for inst in pool(100, 900, max_n=3, max_m=6):
        red = round_entitlements(inst)
        for i in range(inst.n):
            assert wmms(red.rounded_instance, i) <= 2 * wmms(inst, i)
    elapsed = time.time() - t0
    ok = elapsed < 120
    report("3", ok, f"200 weight vectors power-of-two within 2x, 100 "
                    f"instances WMMS' <= 2 WMMS; {elapsed:.1f}s")
    assert ok


@pytest.fixture(scope="module")
def theorem1_runs():
    results = []
    for inst in pool(300, 2000, max_n=4, max_m=10, cost_max=12):
        results.append((inst, solve(inst)))
    return results


def test_criterion_4_theorem1_end_to_end(theorem1_runs):
    t0 = time.time()
    max_ratio = Fraction(0)
    for inst, result in theorem1_runs:
        assert all(e.ok for e in result.trace.of_kind(SafetyCheck))
        assert result.report.max_ratio is not None
        assert result.report.max_ratio <= 20
        max_ratio = max(max_ratio, result.report.max_ratio)
        totals = {i: Fraction(0) for i in range(inst.n)}
        for bag in result.trace.of_kind(BagAssigned):
            totals[bag.agent] += bag.cost
        weights = result.normalized.entitlements.weights
        for i, total in totals.items():
            assert total <= 10 * weights[i]
    elapsed = time.time() - t0
    ok = elapsed < 600
    report("4", ok, f"300 solves, zero safety violations, max ratio "
                    f"{float(max_ratio):.4f} <= 20, per-agent <= 10*w'; "
                    f"{elapsed:.1f}s")
    assert ok


def test_criterion_5_trace_replay(theorem1_runs):
    t0 = time.time()
    for _, result in theorem1_runs:
        assert lemma3_trace_check(result.trace, result.normalized) == []
        assert lemma4_check(result.trace, result.normalized) == []
    elapsed = time.time() - t0
    ok = elapsed < 60
    report("5", ok, f"{len(theorem1_runs)} traces replayed clean through "
                    f"both checkers; {elapsed:.1f}s")
    assert ok


@pytest.mark.xfail(
    strict=True,
    reason="the closed-form constant is 2.1122395940, which the defining "
           "quadratic and the bound-crossing identity both pin down; the "
           "figure-table target 2.11222 +/- 5e-6 excludes it",
)
def test_criterion_6a_theorem3_constant_vs_table():
    c = theorem3_constant()
    ok = abs(c - 2.11222) <= 5e-6
    report("6a", ok, f"theorem3_constant() = {c:.7f} vs 2.11222 +/- 5e-6")
    assert ok


def test_criterion_6b_theorem3_grid():
    t0 = time.time()
    c = theorem3_constant()
    k = (math.sqrt(3) + 1) / 2
    assert abs(13 * c * c - 13 * k * c - 15 * k) < 1e-12
    result = simplex_max(3, "grid", step=1e-3, family="paper3")
    elapsed = time.time() - t0
    ok = abs(result.value - c) <= 1e-3 and elapsed < 60
    report("6b", ok, f"two-bound grid max {result.value:.6f} within 1e-3 of "
                     f"constant {c:.6f}; {elapsed:.1f}s")
    assert ok


def test_criterion_7_theorem4_constant_and_grid():
    t0 = time.time()
    c = theorem4_constant()
    s = math.sqrt(3) + 1
    residual = abs(1 / c + 20 / (17 * c * c)
                   + 40 / (17 * c * c * (2 * c / s - 1)) - 1)
    assert residual < 1e-12
    assert abs(c - 2.5404) <= 1e-4
    grid = sorted_simplex_grid(4, 0.002)
    value, _ = kernel.batch_max(grid, 4, 3, 0.0)
    elapsed = time.time() - t0
    ok = value <= c + 1e-9 and elapsed < 120
    report("7", ok, f"constant {c:.6f} (residual {residual:.1e}), three-bound "
                    f"grid max {value:.6f} never above it; {elapsed:.1f}s")
    assert ok


def test_criterion_8_table_reproduction(tmp_path):
    t0 = time.time()
    runner = CliRunner()
    observed = {}
    for n, target in REFERENCE_TABLE.items():
        out_dir = tmp_path / f"n{n}"
        result = runner.invoke(cli_main, [
            "sample", "--n", str(n), "--samples", str(10**6),
            "--seed", str(20250809 + n), "--out-dir", str(out_dir),
        ])
        assert result.exit_code == 0, result.output
        row = (out_dir / f"sample_n{n}.csv").read_text().strip().splitlines()[1]
        observed[n] = float(row.split(",")[4])
    elapsed = time.time() - t0

    ok = True
    for n, value in observed.items():
        target = REFERENCE_TABLE[n]
        if n in (3, 4):
            ok &= abs(value - target) <= 0.01 * target
        elif n == 5:
            # The search family's supremum here is 1 + sqrt(3), which the
            # published (truncated) value sits 8e-7 below.
            ok &= 0.95 * target <= value <= target + 1e-6
        else:
            # Published values are sampled from below at 10^9 draws; the
            # refined desk-scale search may land slightly past them, so the
            # band is 5% below to 2% above.
            ok &= 0.95 * target <= value <= 1.02 * target
    ok &= elapsed < 1800
    detail = ", ".join(f"n={n}: {v:.5f}/{REFERENCE_TABLE[n]}"
                       for n, v in observed.items())
    report("8", ok, f"{detail}; {elapsed:.0f}s (10^9-sample experiment "
                    f"deliberately not reproduced)")
    assert ok


def test_criterion_9_heatmap(tmp_path):
    t0 = time.time()
    runner = CliRunner()
    out_dir = tmp_path / "hm"
    result = runner.invoke(cli_main, ["heatmap", "--step", "0.01",
                                      "--out-dir", str(out_dir)])
    assert result.exit_code == 0
    lines = (out_dir / "heatmap.csv").read_text().strip().splitlines()
    assert lines[0] == "w1,w2,w3,value,dominating_rule"
    best = 0.0
    centroid_rule = None
    centroid_key = None
    for line in lines[1:]:
        w1, w2, w3, value, rule = line.split(",")
        best = max(best, float(value))
        key = abs(float(w1) - 1 / 3) + abs(float(w2) - 1 / 3)
        if centroid_key is None or key < centroid_key:
            centroid_key = key
            centroid_rule = rule
    elapsed = time.time() - t0
    ok = (abs(best - 2.11222) <= 0.02 and centroid_rule == "red2_symmetric"
          and elapsed < 60)
    report("9", ok, f"grid max {best:.5f} = 2.11222 +/- 0.02, centroid rule "
                    f"{centroid_rule}; {elapsed:.1f}s")
    assert ok
