import math

import numpy as np
import pytest

from choreknife.bounds import (
    BaseCase,
    Grouping,
    Red1,
    Red2,
    SearchConfig,
    base_f,
    best_bound,
    evaluate_derivation,
    heatmap_grid,
    kernel,
    logn_baseline,
    red1_bound,
    red2_bound,
    simplex_max,
    theorem3_constant,
    theorem4_constant,
)
from choreknife.bounds import _pykernel
from choreknife.bounds.calculus import K2, sorted_simplex_grid
from choreknife.errors import InvalidGrouping

THEOREM3 = 2.1122395940121947  # positive root of 13c^2 - 13kc - 15k = 0
THEOREM4 = 2.54042578663066


def test_base_cases():
    assert base_f([1]).value == 1.0
    assert base_f(["1/2", "1/2"]).value == 1.0
    assert abs(base_f([0.2, 0.8]).value - 1.3660254037844386) < 1e-15
    assert base_f(["1/3", "1/3", "1/3"]).value == pytest.approx(15 / 13, abs=0)
    assert base_f([0.2] * 5).value == pytest.approx(20 / 17, abs=0)
    assert base_f([0.125] * 8).value == pytest.approx(13 / 11, abs=0)
    assert base_f([0.2, 0.3, 0.5]) is None


def test_red1_all_in_one_group():
    w = [0.1, 0.2, 0.3, 0.4]
    grouping = Grouping(groups=((0, 1, 2, 3),), representatives=(3,))
    result = red1_bound(w, grouping, lambda child: base_f(child))
    assert result.value == pytest.approx(1 / 0.4, rel=1e-12)
    assert isinstance(result.derivation, Red1)
    assert result.derivation.alpha == pytest.approx(2.5, rel=1e-12)


def test_red1_three_agent_pattern():
    w = [0.2, 0.3, 0.5]
    grouping = Grouping(groups=((1,), (0, 2)), representatives=(1, 2))
    result = red1_bound(w, grouping, lambda child: base_f(child))
    assert result.value == pytest.approx((0.7 / 0.5) * K2, rel=1e-12)


def test_red1_identity_grouping_alpha_one():
    w = [0.2, 0.3, 0.5]
    grouping = Grouping(groups=((0,), (1,), (2,)), representatives=(0, 1, 2))
    result = red1_bound(w, grouping, lambda child: red2_bound(child))
    assert result.derivation.alpha == pytest.approx(1.0, rel=1e-12)
    assert result.value == pytest.approx(red2_bound(w).value, rel=1e-12)


def test_red1_rejects_bad_groupings():
    w = [0.2, 0.3, 0.5]
    with pytest.raises(InvalidGrouping):
        Grouping(groups=((0, 1),), representatives=(2,)).validate(3)
    with pytest.raises(InvalidGrouping):
        Grouping(groups=((0, 1), (1, 2)), representatives=(0, 2)).validate(3)
    with pytest.raises(InvalidGrouping):
        Grouping(groups=((0, 1), (2,)), representatives=(2, 2)).validate(3)
    with pytest.raises(InvalidGrouping):
        red1_bound(w, Grouping(groups=((0, 1, 2),), representatives=(3,)),
                   lambda child: base_f(child))


def test_red2_examples():
    assert red2_bound(["1/3", "1/3", "1/3"]).value == pytest.approx(15 / 13)
    assert red2_bound(["1/4", "1/4", "1/2"]).value == pytest.approx(30 / 13)
    w = [0.15, 0.35, 0.5]
    assert red2_bound(w).value == pytest.approx(15 * 0.5 / (13 * 0.15))
    with pytest.raises(ValueError):
        red2_bound([0.4, 0.6])


def test_theorem3_constant_closed_form():
    c = theorem3_constant()
    k = (math.sqrt(3) + 1) / 2
    assert abs(13 * c * c - 13 * k * c - 15 * k) < 1e-12
    assert abs(c - THEOREM3) < 1e-14
    assert round(c, 4) == 2.1122


def test_theorem3_crossing_point():
    # Independent check: bisect the ratio where the two three-agent bounds
    # meet; both must equal the constant there.
    k = (math.sqrt(3) + 1) / 2

    def gap(rho):
        return k * (1 + rho) - (15 / 13) / rho

    lo, hi = 0.1, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if gap(mid) < 0:
            lo = mid
        else:
            hi = mid
    rho = 0.5 * (lo + hi)
    assert k * (1 + rho) == pytest.approx(theorem3_constant(), abs=1e-9)
    assert (15 / 13) / rho == pytest.approx(theorem3_constant(), abs=1e-9)


def test_theorem4_constant():
    c = theorem4_constant()
    s = math.sqrt(3) + 1
    residual = 1 / c + 20 / (17 * c * c) + 40 / (17 * c * c * (2 * c / s - 1)) - 1
    assert abs(residual) < 1e-12
    assert abs(c - 2.5404) < 1e-4
    assert abs(c - THEOREM4) < 1e-12
    # Strictly decreasing past the two-agent constant: unique root.
    xs = [1.4, 1.8, 2.2, 2.6, 3.0, 5.0]
    values = [1 / x + 20 / (17 * x * x) + 40 / (17 * x * x * (2 * x / s - 1))
              for x in xs]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_best_bound_base_cases_and_two_agents():
    assert best_bound(["1/3", "1/3", "1/3"]).value == pytest.approx(15 / 13)
    rng = np.random.default_rng(1)
    for _ in range(25):
        w = rng.dirichlet([1.0, 1.0])
        assert best_bound(w).value == pytest.approx(K2, abs=0)


def test_best_bound_matches_kernel(seeded_vectors=None):
    rng = np.random.default_rng(7)
    for n in range(2, 9):
        for _ in range(8):
            w = rng.dirichlet(np.ones(n))
            tree = best_bound(w)
            flat = kernel.eval_bound(w, 0, 3, 0.0)
            assert abs(tree.value - flat) < 1e-12
            assert abs(evaluate_derivation(tree.derivation) - tree.value) < 1e-12


def test_kernels_are_twins():
    rng = np.random.default_rng(11)
    for n in range(2, 11):
        for _ in range(6):
            w = rng.dirichlet(np.ones(n))
            for family in (0, 1, 2):
                a = kernel.eval_bound(w, family, 3, 0.0)
                b = _pykernel.eval_bound(w, family, 3, 0.0)
                assert abs(a - b) < 1e-12
    for _ in range(10):
        w3 = rng.dirichlet(np.ones(3))
        w4 = rng.dirichlet(np.ones(4))
        assert abs(kernel.eval_bound(w3, 3, 3, 0.0)
                   - _pykernel.eval_bound(w3, 3, 3, 0.0)) < 1e-12
        assert abs(kernel.eval_bound(w4, 4, 3, 0.0)
                   - _pykernel.eval_bound(w4, 4, 3, 0.0)) < 1e-12


def test_batch_max_matches_scalar_evaluation():
    rng = np.random.default_rng(13)
    block = rng.dirichlet(np.ones(4), size=300)
    value, row = kernel.batch_max(block, 0, 3, 0.0)
    exact = max(kernel.eval_bound(w, 0, 3, 0.0) for w in block)
    assert value == pytest.approx(exact, abs=1e-12)
    assert kernel.eval_bound(block[row], 0, 3, 0.0) == pytest.approx(value)


def test_best_bound_permutation_invariant():
    w = [0.5, 0.2, 0.3]
    assert best_bound(w).value == best_bound([0.2, 0.3, 0.5]).value


def test_best_bound_internal_consistency():
    rng = np.random.default_rng(17)
    for n in (3, 4, 5):
        for _ in range(5):
            w = sorted(rng.dirichlet(np.ones(n)))
            best = best_bound(w).value
            assert best <= red2_bound(w).value + 1e-12
            grouping = Grouping(groups=(tuple(range(n)),),
                                representatives=(n - 1,))
            assert best <= red1_bound(
                w, grouping, lambda c: base_f(c)).value + 1e-12


def test_best_bound_depth_zero_uses_closed_bounds_only():
    w = [0.1, 0.2, 0.7]
    shallow = best_bound(w, SearchConfig("exhaustive", 0))
    assert shallow.value == pytest.approx(red2_bound(w).value)


def test_derivation_reevaluation_property():
    rng = np.random.default_rng(23)
    for n in range(2, 7):
        for _ in range(6):
            w = rng.dirichlet(np.ones(n))
            result = best_bound(w)
            assert result.value >= 1.0
            assert abs(evaluate_derivation(result.derivation)
                       - result.value) < 1e-12


def test_paper3_grid_reaches_theorem3_constant():
    result = simplex_max(3, "grid", step=1e-3, family="paper3")
    assert abs(result.value - theorem3_constant()) <= 1e-3
    assert result.value <= theorem3_constant() + 1e-9


def test_paper3_never_exceeds_constant_anywhere():
    for point in sorted_simplex_grid(3, 0.02):
        assert kernel.eval_bound(point, 3, 3, 0.0) \
            <= theorem3_constant() + 1e-9


def test_paper4_never_exceeds_constant_with_case2_slack():
    c4 = theorem4_constant()
    for point in sorted_simplex_grid(4, 0.02):
        value = kernel.eval_bound(point, 4, 3, 0.0)
        assert value <= c4 + 1e-9
        w1, w2, w3, w4 = point
        if w1 / w3 < w2 / w4:  # the pairing bound's second case
            assert value <= 2.5 + 1e-9


def test_simplex_sample_two_agents_flat():
    result = simplex_max(2, "sample", count=500, seed=9, refine_top=0)
    assert result.value == pytest.approx(K2, abs=0)


def test_simplex_sample_deterministic():
    a = simplex_max(3, "sample", count=2000, seed=4, refine_top=5,
                    refine_iters=50)
    b = simplex_max(3, "sample", count=2000, seed=4, refine_top=5,
                    refine_iters=50)
    assert a.value == b.value and a.weights == b.weights


def test_simplex_local_method_runs():
    result = simplex_max(3, "local", seed=2, restarts=4, refine_iters=300,
                         family="paper3")
    assert 2.0 < result.value <= theorem3_constant() + 1e-9


def test_heatmap_rows():
    step = 0.05
    rows = heatmap_grid(step)
    units = round(1 / step)
    expected = sum(1 for i in range(1, units + 1) for j in range(i, units + 1)
                   if units - i - j >= j)
    assert len(rows) == expected
    for row in rows:
        assert row.w1 <= row.w2 <= row.w3
        assert row.w1 + row.w2 + row.w3 == pytest.approx(1.0, abs=1e-9)
        assert row.dominating_rule in ("red1_two_agent", "red2_symmetric")
        both = (K2 * (row.w1 + row.w3) / row.w3, 15 / 13 * row.w3 / row.w1)
        assert row.value == pytest.approx(min(both), rel=1e-12)


def test_heatmap_centroid_binding_rule_is_symmetric():
    rows = heatmap_grid(0.01)
    centroid = min(rows, key=lambda r: (r.w3 - r.w1) + abs(r.w2 - 1 / 3))
    assert centroid.dominating_rule == "red2_symmetric"
    assert max(r.value for r in rows) == pytest.approx(2.11222, abs=0.02)


def test_logn_baseline():
    assert logn_baseline(8) == 4.0
    assert logn_baseline(2) == 2.0
    assert abs(logn_baseline(3) - 2.584) < 1e-3
    with pytest.raises(ValueError):
        logn_baseline(1)


def test_eval_bound_rejects_bad_weights():
    with pytest.raises(ValueError):
        kernel.eval_bound([0.0, 1.0], 0, 3, 0.0)
    with pytest.raises(ValueError):
        kernel.eval_bound([0.5, 0.5], 3, 3, 0.0)  # paper3 needs n == 3
