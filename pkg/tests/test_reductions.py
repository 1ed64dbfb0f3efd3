from fractions import Fraction

from choreknife.model import Assignment, make_instance
from choreknife.oracle import wmms, wmms_profile
from choreknife.reductions import (
    has_power_of_two_ratios,
    is_entitlement_divisible,
    map_back,
    normalize,
    power_of_two_floor,
    round_entitlements,
    to_sorted,
)


def test_to_sorted_rows_ascending_and_idempotent():
    inst = make_instance(["1/2", "1/2"], [[3, 1, 2], [1, 2, 3]])
    red = to_sorted(inst)
    assert red.sorted_instance.costs[0] == (1, 2, 3)
    assert red.sorted_instance.costs[1] == (1, 2, 3)
    again = to_sorted(red.sorted_instance)
    assert again.sorted_instance.costs == red.sorted_instance.costs


def test_to_sorted_preserves_cost_multisets_and_wmms(small_instances):
    for inst in small_instances[:15]:
        red = to_sorted(inst)
        for i in range(inst.n):
            assert sorted(inst.costs[i]) == list(red.sorted_instance.costs[i])
            assert wmms(inst, i) == wmms(red.sorted_instance, i)


def test_map_back_identity_on_sorted_distinct():
    inst = make_instance(["1/2", "1/2"], [[1, 2, 3], [2, 4, 6]])
    red = to_sorted(inst)
    assignment = Assignment.from_lists([[0, 2], [1]], 3)
    mapped = map_back(assignment, red, inst)
    assert mapped == assignment


def test_map_back_two_agent_trace():
    # Sorted instance rows are both (1,3); giving sorted b1 to agent 1 and
    # sorted b2 to agent 2 maps to original chores 2 and 1 respectively,
    # costing each agent at most her sorted-bundle cost.
    inst = make_instance(["1/2", "1/2"], [[3, 1], [1, 3]])
    red = to_sorted(inst)
    mapped = map_back(Assignment.from_lists([[0], [1]], 2), red, inst)
    assert mapped.bundles == (frozenset({1}), frozenset({0}))
    assert inst.agent_cost(0, mapped.bundles[0]) == 1
    assert inst.agent_cost(1, mapped.bundles[1]) == 1


def test_map_back_domination(small_instances):
    # Per agent, the mapped bundle never costs more than the sorted bundle.
    for seed, inst in enumerate(small_instances[:15]):
        if inst.m == 0:
            continue
        red = to_sorted(inst)
        bundles = [[] for _ in range(inst.n)]
        for chore in range(inst.m):
            bundles[(chore * 7 + seed) % inst.n].append(chore)
        sorted_assignment = Assignment.from_lists(bundles, inst.m)
        mapped = map_back(sorted_assignment, red, inst)
        for i in range(inst.n):
            sorted_cost = red.sorted_instance.agent_cost(
                i, sorted_assignment.bundles[i])
            assert inst.agent_cost(i, mapped.bundles[i]) <= sorted_cost


def test_power_of_two_floor_brackets():
    for value in ["1", "1/2", "3/10", "7/10", "1/5", "99/100", "1/64"]:
        x = Fraction(value)
        f = power_of_two_floor(x)
        assert x / 2 < f <= x or f == x  # x/2 <= f(x) <= x, tight at powers
        assert f.numerator == 1 and (f.denominator & (f.denominator - 1)) == 0


def test_round_entitlements_examples():
    inst = make_instance(["1/2", "1/2"], [[1], [1]])
    assert round_entitlements(inst).rounded_instance.entitlements.weights \
        == (Fraction(1, 2), Fraction(1, 2))

    inst = make_instance(["3/10", "7/10"], [[1], [1]])
    assert round_entitlements(inst).rounded_instance.entitlements.weights \
        == (Fraction(1, 3), Fraction(2, 3))

    inst = make_instance(["1/5", "3/10", "1/2"], [[1], [1], [1]])
    assert round_entitlements(inst).rounded_instance.entitlements.weights \
        == (Fraction(1, 7), Fraction(2, 7), Fraction(4, 7))


def test_rounded_ratios_are_powers_of_two_and_bounded(small_instances):
    for inst in small_instances:
        red = round_entitlements(inst)
        new = red.rounded_instance.entitlements.weights
        old = inst.entitlements.weights
        assert has_power_of_two_ratios(red.rounded_instance.entitlements)
        for i in range(inst.n):
            for j in range(inst.n):
                assert new[i] / new[j] <= 2 * old[i] / old[j]


def test_rounding_at_most_doubles_wmms(small_instances):
    for inst in small_instances[:12]:
        red = round_entitlements(inst)
        for i in range(inst.n):
            assert wmms(red.rounded_instance, i) <= 2 * wmms(inst, i)


def test_normalize_identity_when_already_normal():
    # Costs equal to the weights give WMMS_i = w_i exactly.
    weights = ["1/8", "1/8", "1/4", "1/2"]
    inst = make_instance(weights, [[Fraction(w) for w in weights]] * 4)
    profile = wmms_profile(inst)
    assert profile.values == inst.entitlements.weights
    assert normalize(inst, profile).costs == inst.costs


def test_normalize_single_agent():
    inst = make_instance(["1"], [[2, 6]])
    profile = wmms_profile(inst)
    out = normalize(inst, profile)
    assert out.costs[0] == (Fraction(1, 4), Fraction(3, 4))
    assert wmms_profile(out).values == (1,)


def test_normalize_weighted_example():
    inst = make_instance(["1/3", "2/3"], [[1, 2, 3], [1, 2, 3]])
    profile = wmms_profile(inst)
    assert profile.values[0] == 2
    out = normalize(inst, profile)
    assert out.costs[0] == (Fraction(1, 6), Fraction(1, 3), Fraction(1, 2))
    assert wmms_profile(out).values == (Fraction(1, 3), Fraction(2, 3))


def test_normalize_fixes_every_positive_agent(small_instances):
    for inst in small_instances[:12]:
        profile = wmms_profile(inst)
        out = normalize(inst, profile)
        out_profile = wmms_profile(out)
        for i in range(inst.n):
            if profile.values[i] > 0:
                assert out_profile.values[i] == inst.entitlements.weights[i]
            else:
                assert all(c == 0 for c in out.costs[i])


def test_divisibility_predicates():
    quarters = make_instance(["1/4", "1/4", "1/2"], [[1]] * 3).entitlements
    assert is_entitlement_divisible(quarters)
    assert has_power_of_two_ratios(quarters)
    triple = make_instance(["1/4", "3/4"], [[1]] * 2).entitlements
    assert is_entitlement_divisible(triple)  # ratio 3 is integral
    assert not has_power_of_two_ratios(triple)
    assert not is_entitlement_divisible(
        make_instance(["3/10", "7/10"], [[1]] * 2).entitlements)
