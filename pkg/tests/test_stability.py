import random

from hypothesis import given, settings, strategies as st

from spast import (GenParams, blocking_pairs, check_valid, generate, is_stable,
                   parse_instance, random_valid_matching, solve)

NOTIONS = ("weak", "strong", "super")


def test_check_valid_clean_on_i3_output(i3):
    result = solve(i3)
    assert check_valid(i3, result.matching.assignment) == []


def test_check_valid_project_capacity(i2):
    # both students on p1 while c1 = 1
    assert any("over capacity" in p for p in check_valid(i2, {0: 0, 1: 0}))


def test_check_valid_unacceptable_pair(i2):
    # s2 only finds p1 acceptable
    assert any("unacceptable" in p for p in check_valid(i2, {1: 1}))


def test_blocking_strong_on_i2_m1(i2):
    # M1 = {(s1, p2), (s2, p1)}: l1 gains by swapping s2 out of p1 for s1.
    report = blocking_pairs(i2, {0: 1, 1: 0}, "strong")
    assert [(bp.student, bp.project, bp.clause) for bp in report.pairs] == [(0, 0, "2a+2b(iii)")]


def test_blocking_weak_on_i2_m1_empty(i2):
    assert not blocking_pairs(i2, {0: 1, 1: 0}, "weak").pairs


def test_blocking_strong_on_i2_m2_empty(i2):
    assert not blocking_pairs(i2, {0: 0}, "strong").pairs


def test_empty_matching_blocked_by_open_seats():
    inst = parse_instance("1 1 1\ns1 : p1\np1 : 1 : l1\nl1 : 1 : s1\n")
    report = blocking_pairs(inst, {}, "strong")
    assert [(bp.student, bp.project, bp.clause) for bp in report.pairs] == [(0, 0, "1a+1b(i)")]


def _random_instance(seed):
    rng = random.Random(seed)
    n3 = rng.randint(1, 3)
    n2 = rng.randint(n3, 5)
    return generate(GenParams(
        n1=rng.randint(1, 6), n2=n2, n3=n3,
        pref_len_min=1, pref_len_max=min(3, n2),
        tie_probability=rng.choice([0.0, 0.3, 0.7]),
        cap_min=1, cap_max=2, seed=seed))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_notion_nesting(seed):
    inst = _random_instance(seed)
    matching = random_valid_matching(inst, seed)
    weak = {(bp.student, bp.project) for bp in blocking_pairs(inst, matching, "weak").pairs}
    strong = {(bp.student, bp.project) for bp in blocking_pairs(inst, matching, "strong").pairs}
    super_ = {(bp.student, bp.project) for bp in blocking_pairs(inst, matching, "super").pairs}
    assert weak <= strong <= super_


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_notions_coincide_without_ties(seed):
    rng = random.Random(seed)
    n3 = rng.randint(1, 3)
    n2 = rng.randint(n3, 5)
    inst = generate(GenParams(
        n1=rng.randint(1, 6), n2=n2, n3=n3,
        pref_len_min=1, pref_len_max=min(3, n2),
        tie_probability=0.0, cap_min=1, cap_max=2, seed=seed))
    matching = random_valid_matching(inst, seed)
    reports = {n: {(bp.student, bp.project) for bp in blocking_pairs(inst, matching, n).pairs}
               for n in NOTIONS}
    assert reports["weak"] == reports["strong"] == reports["super"]


def test_blocking_is_pure_function(i3):
    matching = random_valid_matching(i3, 42)
    for notion in NOTIONS:
        first = blocking_pairs(i3, matching, notion)
        second = blocking_pairs(i3, matching, notion)
        assert first == second


def test_is_stable_agrees_with_report(i3):
    for seed in range(20):
        matching = random_valid_matching(i3, seed)
        for notion in NOTIONS:
            assert is_stable(i3, matching, notion) == (not blocking_pairs(i3, matching, notion).pairs)
