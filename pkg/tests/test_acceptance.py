"""Acceptance suite: one test per criterion, run with `pytest -v -s`.

Criterion 3's unassigned-set clause and criterion 5 assert a uniqueness
property of strongly stable matchings (equal size, identical assigned
students) that provably fails on instances where a student ties two projects
of one lecturer: such instances admit strongly stable matchings with
different assigned sets, and the corpus contains a handful of them.  Those
two assertions are implemented exactly as stated and fail honestly on the
counterexamples; the failure messages print one such instance in full.
"""

import random
import time

import pytest

from spast import (GenParams, blocking_pairs, enumerate_strongly_stable,
                   format_instance, generate, is_stable, parse_instance,
                   random_valid_matching, solve)
from spast.bench import loglog_slope, run_bench
from spast.instance import build_rank_table
from spast.solver import ReducedGraph, max_matching_reduced
from conftest import I2_TEXT, I3_TEXT, UNSOLVABLE_TEXT, names

CORPUS_SIZE = 10_000


def corpus_params(trial: int) -> GenParams:
    rng = random.Random(trial)
    n3 = rng.randint(1, 3)
    n2 = rng.randint(n3, 5)
    n1 = rng.randint(1, 6)
    return GenParams(
        n1=n1, n2=n2, n3=n3,
        pref_len_min=1, pref_len_max=min(3, n2),
        tie_probability=rng.choice([0.0, 0.3, 0.7]),
        cap_min=1, cap_max=2, seed=trial * 31 + 5)


class CorpusReport:
    def __init__(self) -> None:
        self.instances = 0
        self.solvable = 0
        self.elapsed = 0.0
        self.existence_mismatches: list[int] = []
        self.unstable_outputs: list[int] = []
        self.rank_mismatches: list[int] = []
        self.unassigned_mismatches: list[int] = []
        self.unsound_deletions: list[int] = []
        self.size_violations: list[int] = []
        self.examples: dict[int, str] = {}

    def note(self, bucket: list[int], trial: int, inst) -> None:
        bucket.append(trial)
        self.examples.setdefault(trial, format_instance(inst))


@pytest.fixture(scope="session")
def corpus_report() -> CorpusReport:
    report = CorpusReport()
    start = time.perf_counter()
    for trial in range(CORPUS_SIZE):
        inst = generate(corpus_params(trial))
        result = solve(inst)
        oracle = enumerate_strongly_stable(inst)
        report.instances += 1

        if result.solvable != oracle.solvable:
            report.note(report.existence_mismatches, trial, inst)
            continue
        stable_pairs = {(s, p) for m in oracle.stable for s, p in m.items()}
        if stable_pairs & result.deleted_pairs():
            report.note(report.unsound_deletions, trial, inst)
        if not oracle.solvable:
            continue

        report.solvable += 1
        sets = {frozenset(m) for m in oracle.stable}
        sizes = {len(m) for m in oracle.stable}
        if len(sets) > 1 or len(sizes) > 1:
            report.note(report.size_violations, trial, inst)

        assignment = result.matching.assignment
        if not is_stable(inst, assignment):
            report.note(report.unstable_outputs, trial, inst)
        srank = build_rank_table(inst).student_rank
        if any(srank[s][p] != oracle.best_rank.get(s) for s, p in assignment.items()):
            report.note(report.rank_mismatches, trial, inst)
        assigned = frozenset(assignment)
        if any(frozenset(m) != assigned for m in oracle.stable):
            report.note(report.unassigned_mismatches, trial, inst)
    report.elapsed = time.perf_counter() - start
    return report


def _example_text(report: CorpusReport, trials: list[int]) -> str:
    first = trials[0]
    return f"first counterexample (trial {first}):\n{report.examples[first]}"


# -- criterion 1 --------------------------------------------------------------

def test_criterion_1_golden_trace():
    inst = parse_instance(I3_TEXT)
    result = solve(inst)

    deletions_by_round: dict[int, set[tuple[str, str]]] = {}
    for ev in result.trace:
        if ev.kind == "delete":
            deletions_by_round.setdefault(ev.round, set()).add(
                (inst.students[ev.student], inst.projects[ev.project]))
    assert deletions_by_round[1] == {
        ("s3", "p4"), ("s6", "p2"), ("s7", "p3"),
        ("s1", "p1"), ("s2", "p1"), ("s3", "p1")}
    assert deletions_by_round[2] == {("s4", "p2"), ("s5", "p2")}
    assert deletions_by_round[3] == {("s8", "p5")}

    critical = [(ev.round, {inst.students[s] for s in ev.students})
                for ev in result.trace if ev.kind == "critical-set"]
    assert critical == [(1, {"s1", "s2", "s3"}), (2, set()), (3, set())]

    (pr_star,) = [ev.projects for ev in result.trace if ev.kind == "pr-star"]
    assert {inst.projects[j] for j in pr_star} == {"p5"}

    assert names(inst, result.matching.assignment) == [
        ("s1", "p6"), ("s2", "p2"), ("s4", "p5"), ("s5", "p3"),
        ("s6", "p4"), ("s7", "p1"), ("s8", "p1")]

    best = min(_timed_solve(inst) for _ in range(5))
    assert best < 0.010, f"solve took {best * 1000:.2f} ms"
    print("criterion 1 (golden trace, <10ms): PASS")


def _timed_solve(inst) -> float:
    start = time.perf_counter()
    solve(inst)
    return time.perf_counter() - start


# -- criterion 2 --------------------------------------------------------------

def test_criterion_2_reference_verdicts():
    i2 = parse_instance(I2_TEXT)
    result = solve(i2)
    assert names(i2, result.matching.assignment) == [("s1", "p1")]

    unsolvable = parse_instance(UNSOLVABLE_TEXT)
    assert solve(unsolvable).matching is None
    print("criterion 2 (reference outputs): PASS")


# -- criteria 3-5 over the shared corpus --------------------------------------

def test_criterion_3_oracle_equivalence(corpus_report):
    r = corpus_report
    assert r.instances >= 10_000
    assert r.elapsed < 300, f"corpus took {r.elapsed:.0f}s"
    problems = []
    if r.existence_mismatches:
        problems.append(f"existence disagreements on trials {r.existence_mismatches[:5]}\n"
                        + _example_text(r, r.existence_mismatches))
    if r.unstable_outputs:
        problems.append(f"unstable outputs on trials {r.unstable_outputs[:5]}\n"
                        + _example_text(r, r.unstable_outputs))
    if r.rank_mismatches:
        problems.append(f"rank mismatches on trials {r.rank_mismatches[:5]}\n"
                        + _example_text(r, r.rank_mismatches))
    if r.unassigned_mismatches:
        problems.append(
            f"unassigned-set mismatches on trials {r.unassigned_mismatches[:5]} "
            f"(these instances admit strongly stable matchings with different "
            f"assigned sets, so no output can match them all)\n"
            + _example_text(r, r.unassigned_mismatches))
    if problems:
        print(f"criterion 3 (oracle equivalence over {r.instances}): FAIL")
        pytest.fail("; ".join(problems))
    print(f"criterion 3 (oracle equivalence over {r.instances}, {r.elapsed:.0f}s): PASS")


def test_criterion_4_deletion_soundness(corpus_report):
    r = corpus_report
    if r.unsound_deletions:
        print("criterion 4 (deletion soundness): FAIL")
        pytest.fail(f"stable pairs deleted on trials {r.unsound_deletions[:5]}\n"
                    + _example_text(r, r.unsound_deletions))
    print(f"criterion 4 (deletion soundness over {r.instances}): PASS")


def test_criterion_5_same_size_property(corpus_report):
    r = corpus_report
    if r.size_violations:
        print("criterion 5 (same size / assigned set): FAIL")
        pytest.fail(
            f"{len(r.size_violations)} of {r.solvable} solvable instances admit "
            f"strongly stable matchings with different sizes or assigned sets "
            f"(trials {r.size_violations[:5]})\n" + _example_text(r, r.size_violations))
    print(f"criterion 5 (same size over {r.solvable} solvable): PASS")


# -- criterion 6 --------------------------------------------------------------

def test_criterion_6_nesting_property():
    tie_free_checked = 0
    for trial in range(1000):
        inst = generate(corpus_params(trial))
        matching = random_valid_matching(inst, seed=trial * 3 + 1)
        weak = {(bp.student, bp.project) for bp in blocking_pairs(inst, matching, "weak").pairs}
        strong = {(bp.student, bp.project) for bp in blocking_pairs(inst, matching, "strong").pairs}
        super_ = {(bp.student, bp.project) for bp in blocking_pairs(inst, matching, "super").pairs}
        assert weak <= strong <= super_, f"nesting broken on trial {trial}"
        has_tie = any(len(tie) > 1 for prefs in inst.student_prefs + inst.lecturer_prefs
                      for tie in prefs)
        if not has_tie:
            tie_free_checked += 1
            assert weak == strong == super_, f"strict-instance mismatch on trial {trial}"
    assert tie_free_checked > 100
    print(f"criterion 6 (nesting over 1000 pairs, {tie_free_checked} tie-free): PASS")


# -- criterion 7 --------------------------------------------------------------

def test_criterion_7_scaling():
    sizes = [1000, 2000, 4000, 8000]
    rows = run_bench(sizes, reps=3, seed=0, backends=["auto"])
    slope = loglog_slope(rows, "auto")
    largest = next(r for r in rows if r.m == 8000)
    assert slope <= 2.3, f"log-log slope {slope:.2f} exceeds 2.3"
    assert largest.median_seconds < 5.0, f"m=8000 took {largest.median_seconds:.2f}s"
    print(f"criterion 7 (slope {slope:.2f} <= 2.3, m=8000 in "
          f"{largest.median_seconds:.2f}s): PASS")


# -- criterion 8 --------------------------------------------------------------

def brute_deficiency(quotas, adjacency) -> int:
    worst = 0
    n = len(adjacency)
    for mask in range(1, 1 << n):
        members = [i for i in range(n) if mask >> i & 1]
        neighbourhood = {j for i in members for j in adjacency[i]}
        worst = max(worst, len(members) - sum(quotas[j] for j in neighbourhood))
    return worst


def test_criterion_8_matching_deficiency_identity():
    rng = random.Random(88)
    for trial in range(1000):
        n_students = rng.randint(1, 8)
        n_projects = rng.randint(1, 5)
        quotas = [rng.randint(1, 2) for _ in range(n_projects)]
        adjacency = [sorted(rng.sample(range(n_projects), rng.randint(1, n_projects)))
                     for _ in range(n_students)]
        n_dummies = rng.randint(0, 2) if n_students > 2 else 0
        gr = ReducedGraph(
            real_students=list(range(n_students - n_dummies)),
            dummy_lecturer=[0] * n_dummies,
            projects=list(range(n_projects)),
            quotas=quotas,
            adjacency=adjacency)
        ms = max_matching_reduced(gr)
        assert ms.size == n_students - brute_deficiency(quotas, adjacency), \
            f"identity broken on trial {trial}"
    print("criterion 8 (|matching| = |students| - deficiency over 1000 graphs): PASS")
