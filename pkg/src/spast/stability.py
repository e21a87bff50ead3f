"""Blocking-pair checkers for the three stability notions under ties.

A matching is weakly / strongly / super-stable when no acceptable unmatched
(student, project) pair blocks it under the corresponding clause tree.  The
three notions differ in how indifference is treated: weak blocking needs both
sides to strictly improve, super blocking lets both be merely no-worse-off,
and strong blocking sits in between (one side strictly improves, the other is
no worse off).  The checkers here evaluate the clause trees verbatim and are
pure functions of (instance, matching, notion).
"""

from __future__ import annotations

from dataclasses import dataclass

from .instance import Instance, RankTable, build_rank_table

NOTIONS = ("weak", "strong", "super")


@dataclass(frozen=True)
class BlockingPair:
    student: int
    project: int
    clause: str


@dataclass(frozen=True)
class BlockingReport:
    notion: str
    pairs: tuple[BlockingPair, ...]

    def __bool__(self) -> bool:
        return bool(self.pairs)


def check_valid(inst: Instance, assignment: dict[int, int]) -> list[str]:
    """List every capacity or acceptability violation of an assignment."""
    problems: list[str] = []
    proj_load = [0] * inst.num_projects
    lec_load = [0] * inst.num_lecturers
    for s, p in assignment.items():
        if not 0 <= s < inst.num_students:
            problems.append(f"unknown student index {s}")
            continue
        if not 0 <= p < inst.num_projects:
            problems.append(f"{inst.students[s]}: unknown project index {p}")
            continue
        if p not in {q for tie in inst.student_prefs[s] for q in tie}:
            problems.append(f"{inst.students[s]} assigned unacceptable project {inst.projects[p]}")
        proj_load[p] += 1
        lec_load[inst.project_owner[p]] += 1
    for j, load in enumerate(proj_load):
        if load > inst.project_capacity[j]:
            problems.append(f"project {inst.projects[j]} over capacity: {load} > {inst.project_capacity[j]}")
    for k, load in enumerate(lec_load):
        if load > inst.lecturer_capacity[k]:
            problems.append(f"lecturer {inst.lecturers[k]} over capacity: {load} > {inst.lecturer_capacity[k]}")
    return problems


class _MatchView:
    """Subscription state of a matching, precomputed for clause evaluation."""

    def __init__(self, inst: Instance, ranks: RankTable, assignment: dict[int, int]):
        self.assignment = assignment
        self.proj_students: list[list[int]] = [[] for _ in range(inst.num_projects)]
        self.lec_students: list[list[int]] = [[] for _ in range(inst.num_lecturers)]
        for s, p in assignment.items():
            self.proj_students[p].append(s)
            self.lec_students[inst.project_owner[p]].append(s)
        # Worst rank among assignees, per project (via the owner's list) and
        # per lecturer; None when empty.
        self.worst_proj: list[int | None] = [None] * inst.num_projects
        self.worst_lec: list[int | None] = [None] * inst.num_lecturers
        for j in range(inst.num_projects):
            k = inst.project_owner[j]
            if self.proj_students[j]:
                self.worst_proj[j] = max(ranks.lecturer_rank[k][s] for s in self.proj_students[j])
        for k in range(inst.num_lecturers):
            if self.lec_students[k]:
                self.worst_lec[k] = max(ranks.lecturer_rank[k][s] for s in self.lec_students[k])


def _blocks(inst: Instance, ranks: RankTable, view: _MatchView,
            s: int, p: int, notion: str) -> str | None:
    """Return the fired clause tag if (s, p) blocks the matching, else None."""
    k = inst.project_owner[p]
    assigned = view.assignment.get(s)
    s_rank_p = ranks.student_rank[s][p]
    prefers = assigned is None or s_rank_p < ranks.student_rank[s][assigned]
    indifferent = assigned is not None and s_rank_p == ranks.student_rank[s][assigned]

    p_under = len(view.proj_students[p]) < inst.project_capacity[p]
    p_full = len(view.proj_students[p]) >= inst.project_capacity[p]
    l_under = len(view.lec_students[k]) < inst.lecturer_capacity[k]
    l_full = len(view.lec_students[k]) >= inst.lecturer_capacity[k]
    in_lk = s in view.lec_students[k]
    lrank = ranks.lecturer_rank[k][s]
    worst_p = view.worst_proj[p]
    worst_l = view.worst_lec[k]

    if notion == "weak":
        if prefers:
            if p_under and l_under:
                return "(a)+(b)(i)"
            if p_under and l_full and (in_lk or (worst_l is not None and lrank < worst_l)):
                return "(a)+(b)(ii)"
            if p_full and worst_p is not None and lrank < worst_p:
                return "(a)+(b)(iii)"
        return None

    if notion == "super":
        if prefers or indifferent:
            if p_under and l_under:
                return "(a)+(b)(i)"
            if p_under and l_full and (in_lk or (worst_l is not None and lrank <= worst_l)):
                return "(a)+(b)(ii)"
            if p_full and worst_p is not None and lrank <= worst_p:
                return "(a)+(b)(iii)"
        return None

    # strong
    if prefers:
        if p_under and l_under:
            return "1a+1b(i)"
        if p_under and l_full and (in_lk or (worst_l is not None and lrank <= worst_l)):
            return "1a+1b(ii)"
        if p_full and worst_p is not None and lrank <= worst_p:
            return "1a+1b(iii)"
    elif indifferent:
        if p_under and l_under and not in_lk:
            return "2a+2b(i)"
        if p_under and l_full and not in_lk and worst_l is not None and lrank < worst_l:
            return "2a+2b(ii)"
        if p_full and worst_p is not None and lrank < worst_p:
            return "2a+2b(iii)"
    return None


def blocking_pairs(inst: Instance, assignment: dict[int, int], notion: str = "strong",
                   ranks: RankTable | None = None) -> BlockingReport:
    """Enumerate every blocking pair of a valid matching under ``notion``."""
    if notion not in NOTIONS:
        raise ValueError(f"unknown stability notion {notion!r}")
    if ranks is None:
        ranks = build_rank_table(inst)
    view = _MatchView(inst, ranks, assignment)
    found: list[BlockingPair] = []
    for s in range(inst.num_students):
        for tie in inst.student_prefs[s]:
            for p in tie:
                if assignment.get(s) == p:
                    continue
                clause = _blocks(inst, ranks, view, s, p, notion)
                if clause is not None:
                    found.append(BlockingPair(s, p, clause))
    return BlockingReport(notion, tuple(found))


def is_stable(inst: Instance, assignment: dict[int, int], notion: str = "strong",
              ranks: RankTable | None = None) -> bool:
    """Early-exit stability test; same clauses as ``blocking_pairs``."""
    if ranks is None:
        ranks = build_rank_table(inst)
    view = _MatchView(inst, ranks, assignment)
    for s in range(inst.num_students):
        for tie in inst.student_prefs[s]:
            for p in tie:
                if assignment.get(s) == p:
                    continue
                if _blocks(inst, ranks, view, s, p, notion) is not None:
                    return False
    return True
