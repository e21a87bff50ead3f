import itertools

import pytest
from hypothesis import given, settings, strategies as st

from spast.quotamatch import MatchState, available_backends


def brute_force_max(adjacency, caps, owner=None, lec_caps=None):
    """Largest capacity-respecting matching, by exhaustive assignment."""
    n = len(adjacency)
    if owner is None:
        owner = [0] * len(caps)
        lec_caps = [sum(caps) + 1]
    best = 0
    for combo in itertools.product(*[adj + [None] for adj in adjacency]):
        proj = [0] * len(caps)
        lec = [0] * len(lec_caps)
        size = 0
        ok = True
        for p in combo:
            if p is None:
                continue
            proj[p] += 1
            lec[owner[p]] += 1
            size += 1
            if proj[p] > caps[p] or lec[owner[p]] > lec_caps[owner[p]]:
                ok = False
                break
        if ok and size > best:
            best = size
    return best


@st.composite
def small_graphs(draw):
    n_students = draw(st.integers(0, 6))
    n_projects = draw(st.integers(1, 5))
    adjacency = [sorted(draw(st.sets(st.integers(0, n_projects - 1), max_size=n_projects)))
                 for _ in range(n_students)]
    caps = [draw(st.integers(1, 3)) for _ in range(n_projects)]
    n_lect = draw(st.integers(1, 3))
    owner = [draw(st.integers(0, n_lect - 1)) for _ in range(n_projects)]
    lec_caps = [draw(st.integers(1, 4)) for _ in range(n_lect)]
    return adjacency, caps, owner, lec_caps


@settings(max_examples=150, deadline=None)
@given(small_graphs())
def test_matches_brute_force_with_lecturer_caps(graph):
    adjacency, caps, owner, lec_caps = graph
    ms = MatchState(adjacency, caps, owner, lec_caps)
    ms.augment()
    assert ms.size == brute_force_max(adjacency, caps, owner, lec_caps)


@settings(max_examples=150, deadline=None)
@given(small_graphs())
def test_matches_brute_force_project_caps_only(graph):
    adjacency, caps, _, _ = graph
    ms = MatchState(adjacency, caps)
    ms.augment()
    assert ms.size == brute_force_max(adjacency, caps)


@pytest.mark.skipif(len(available_backends()) < 2,
                    reason="compiled kernel unavailable")
@settings(max_examples=200, deadline=None)
@given(small_graphs())
def test_backend_parity(graph):
    adjacency, caps, owner, lec_caps = graph
    results = []
    for backend in available_backends():
        ms = MatchState(adjacency, caps, owner, lec_caps, backend=backend)
        ms.augment()
        results.append(ms.assignment())
    assert results[0] == results[1]


def test_backend_parity_with_phases():
    if len(available_backends()) < 2:
        pytest.skip("compiled kernel unavailable")
    adjacency = [[0, 1], [0], [1, 2], [2], [0, 2]]
    caps = [2, 1, 2]
    owner = [0, 0, 1]
    lec_caps = [2, 2]
    results = []
    for backend in available_backends():
        ms = MatchState(adjacency, caps, owner, lec_caps, backend=backend)
        ms.augment([0, 2], allowed={0, 2})
        ms.augment(locked={0})
        results.append(ms.assignment())
    assert results[0] == results[1]


def test_locked_projects_never_drain():
    # p0 has one seat; locking it must keep its load at 1 even when the
    # maximum matching would prefer rerouting through it.
    adjacency = [[0], [0, 1], [1]]
    caps = [1, 1]
    ms = MatchState(adjacency, caps)
    ms.augment([0], allowed={0})
    assert ms.assignment()[0] == 0
    ms.augment(locked={0})
    assert ms.project_load(0) == 1
    assert ms.assignment()[0] == 0


def test_seeding_is_respected():
    ms = MatchState([[0], [0]], [1])
    ms.set_assignment({1: 0})
    ms.augment()
    assert ms.assignment() == [-1, 0]


def test_lecturer_capacity_blocks_overload():
    # three students, two projects of one lecturer with capacity 2
    ms = MatchState([[0], [0], [1]], [2, 1], [0, 0], [2])
    ms.augment()
    assert ms.size == 2


def test_rerouting_across_lecturers():
    # s0 can free l0 capacity by moving to l1's project
    ms = MatchState([[0, 1], [0]], [1, 1], [0, 1], [1, 1])
    ms.augment()
    assert ms.size == 2
