import pytest
from hypothesis import given, settings, strategies as st

from spast import (GenParams, InstanceParseError, build_rank_table, format_instance,
                   generate, instance_from_json, instance_to_json, parse_instance,
                   validate)
from conftest import I1_TEXT, I3_TEXT


def test_parse_i1_structure(i1):
    assert i1.students == ("s1", "s2", "s3")
    assert i1.projects == ("p1", "p2", "p3")
    assert i1.lecturers == ("l1", "l2")
    assert i1.student_prefs[0] == ((0, 1),)          # s1: (p1 p2)
    assert i1.student_prefs[1] == ((1,), (2,))       # s2: p2 p3
    assert i1.project_capacity == (1, 1, 1)
    assert i1.lecturer_capacity == (2, 1)
    assert i1.project_owner == (0, 0, 1)
    assert i1.lecturer_prefs[0] == ((2,), (0, 1))    # l1: s3 (s1 s2)


def test_parse_minimal_instance():
    inst = parse_instance("1 1 1\ns1 : p1\np1 : 1 : l1\nl1 : 1 : s1\n")
    assert inst.num_students == inst.num_projects == inst.num_lecturers == 1
    assert validate(inst) == []


def test_parse_unknown_identifier():
    text = "2 2 1\ns1 : p1\ns2 : p7\np1 : 1 : l1\np2 : 1 : l1\nl1 : 2 : s1 s2\n"
    with pytest.raises(InstanceParseError, match="p7"):
        parse_instance(text)


def test_parse_duplicate_pref_entry():
    text = "1 2 1\ns1 : p1 p1\np1 : 1 : l1\np2 : 1 : l1\nl1 : 2 : s1\n"
    with pytest.raises(InstanceParseError, match="duplicate"):
        parse_instance(text)


def test_parse_missing_capacity():
    text = "1 1 1\ns1 : p1\np1 : : l1\nl1 : 1 : s1\n"
    with pytest.raises(InstanceParseError, match="capacity"):
        parse_instance(text)


def test_parse_reports_line_numbers():
    text = "1 1 1\ns1 : (p1\np1 : 1 : l1\nl1 : 1 : s1\n"
    with pytest.raises(InstanceParseError, match="line 2"):
        parse_instance(text)


def test_parse_comments_and_blanks():
    text = "# header\n\n1 1 1\ns1 : p1  # inline\np1 : 1 : l1\nl1 : 1 : s1\n"
    assert validate(parse_instance(text)) == []


def test_validate_i3_clean(i3):
    assert validate(i3) == []


def test_validate_capacity_bound():
    # l1 owns p1 with capacity 3 but d1 = 2: below the max project capacity.
    text = "1 1 1\ns1 : p1\np1 : 3 : l1\nl1 : 2 : s1\n"
    problems = validate(parse_instance(text))
    assert any("below max project capacity" in p for p in problems)


def test_validate_lecturer_list_incomplete():
    text = "2 1 1\ns1 : p1\ns2 : p1\np1 : 1 : l1\nl1 : 1 : s1\n"
    problems = validate(parse_instance(text))
    assert any("incomplete" in p and "s2" in p for p in problems)


def test_validate_lecturer_lists_stranger():
    text = "2 2 2\ns1 : p1\ns2 : p2\np1 : 1 : l1\np2 : 1 : l2\nl1 : 1 : s1 s2\nl2 : 1 : s2\n"
    problems = validate(parse_instance(text))
    assert any("ranks none" in p for p in problems)


def test_rank_table_lecturer_ranks(i1):
    ranks = build_rank_table(i1)
    l1 = 0
    assert ranks.lecturer_rank[l1][2] == 0  # s3 first
    assert ranks.lecturer_rank[l1][0] == ranks.lecturer_rank[l1][1] == 1


def test_rank_table_projected_lists(i1):
    # Only s1 and s3 find p1 acceptable, so projecting l1's list onto p1
    # keeps s3 ahead of s1; p2 is acceptable to s1 and s2, who are tied.
    ranks = build_rank_table(i1)
    assert ranks.projected[(0, 0)] == ((2,), (0,))
    assert ranks.projected[(0, 1)] == ((0, 1),)


def test_rank_table_singleton_list():
    inst = parse_instance("1 1 1\ns1 : p1\np1 : 1 : l1\nl1 : 1 : s1\n")
    ranks = build_rank_table(inst)
    assert ranks.lecturer_rank[0][0] == 0
    assert ranks.projected[(0, 0)] == ((0,),)


def test_round_trip_fixed(i1, i3):
    for text in (I1_TEXT, I3_TEXT):
        inst = parse_instance(text)
        assert parse_instance(format_instance(inst)) == inst


def test_json_round_trip(i3):
    assert instance_from_json(instance_to_json(i3)) == i3
    # the generic parser accepts the JSON mirror directly
    assert parse_instance(instance_to_json(i3)) == i3


@st.composite
def gen_params(draw):
    n3 = draw(st.integers(1, 3))
    n2 = draw(st.integers(n3, 6))
    n1 = draw(st.integers(1, 7))
    pref_max = draw(st.integers(1, n2))
    return GenParams(
        n1=n1, n2=n2, n3=n3,
        pref_len_min=1, pref_len_max=pref_max,
        tie_probability=draw(st.sampled_from([0.0, 0.3, 0.7, 1.0])),
        cap_min=1, cap_max=draw(st.integers(1, 3)),
        seed=draw(st.integers(0, 2 ** 32)),
    )


@settings(max_examples=120, deadline=None)
@given(gen_params())
def test_round_trip_generated(params):
    inst = generate(params)
    assert parse_instance(format_instance(inst)) == inst
    assert instance_from_json(instance_to_json(inst)) == inst


@settings(max_examples=120, deadline=None)
@given(gen_params())
def test_rank_tables_order_isomorphic(params):
    inst = generate(params)
    ranks = build_rank_table(inst)
    for s in range(inst.num_students):
        flat = [p for tie in inst.student_prefs[s] for p in tie]
        for a_pos, a in enumerate(flat):
            for b in flat[a_pos + 1:]:
                tie_a = next(i for i, t in enumerate(inst.student_prefs[s]) if a in t)
                tie_b = next(i for i, t in enumerate(inst.student_prefs[s]) if b in t)
                assert (ranks.student_rank[s][a] < ranks.student_rank[s][b]) == (tie_a < tie_b)


@settings(max_examples=120, deadline=None)
@given(gen_params())
def test_projected_membership_rule(params):
    inst = generate(params)
    ranks = build_rank_table(inst)
    listed = [{s for tie in inst.lecturer_prefs[k] for s in tie}
              for k in range(inst.num_lecturers)]
    for (k, j), ties in ranks.projected.items():
        members = {s for tie in ties for s in tie}
        expected = {s for s in listed[k]
                    if j in ranks.student_rank[s] and inst.project_owner[j] == k}
        assert members == expected
