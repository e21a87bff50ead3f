"""Exhaustive enumeration of strongly stable matchings on small instances.

Ground truth for the solver: every student is tried on each acceptable
project and on being unassigned, capacity-violating branches are pruned, and
the surviving matchings are filtered by the strong-stability checker.  The
search space is fenced by a hard size guard so the CLI refuses oversized
instances instead of silently truncating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .instance import Instance, build_rank_table
from .solver import SolveResult
from .stability import blocking_pairs, check_valid, is_stable

DEFAULT_ENUMERATION_BOUND = 10 ** 7


class EnumerationBoundError(ValueError):
    def __init__(self, states: int, bound: int) -> None:
        self.states = states
        self.bound = bound
        super().__init__(
            f"instance too large to enumerate: {states} assignment combinations "
            f"exceed the bound of {bound}")


@dataclass
class OracleResult:
    all_matchings: list[dict[int, int]]
    stable: list[dict[int, int]]
    best_rank: dict[int, int] = field(default_factory=dict)

    @property
    def solvable(self) -> bool:
        return bool(self.stable)

    def assigned_sets(self) -> list[frozenset[int]]:
        return [frozenset(m) for m in self.stable]


def enumeration_states(inst: Instance) -> int:
    return math.prod(len(inst.acceptable_projects(s)) + 1
                     for s in range(inst.num_students))


def enumerate_strongly_stable(inst: Instance,
                              max_states: int = DEFAULT_ENUMERATION_BOUND) -> OracleResult:
    """Enumerate every valid matching, keeping the strongly stable ones."""
    states = enumeration_states(inst)
    if states > max_states:
        raise EnumerationBoundError(states, max_states)

    ranks = build_rank_table(inst)
    n1 = inst.num_students
    choices = [[None] + inst.acceptable_projects(s) for s in range(n1)]
    proj_load = [0] * inst.num_projects
    lec_load = [0] * inst.num_lecturers
    proj_cap = inst.project_capacity
    lec_cap = inst.lecturer_capacity
    owner = inst.project_owner

    all_matchings: list[dict[int, int]] = []
    stable: list[dict[int, int]] = []
    current: dict[int, int] = {}

    def descend(s: int) -> None:
        if s == n1:
            matching = dict(current)
            all_matchings.append(matching)
            if is_stable(inst, matching, "strong", ranks):
                stable.append(matching)
            return
        for p in choices[s]:
            if p is None:
                descend(s + 1)
                continue
            k = owner[p]
            if proj_load[p] >= proj_cap[p] or lec_load[k] >= lec_cap[k]:
                continue
            proj_load[p] += 1
            lec_load[k] += 1
            current[s] = p
            descend(s + 1)
            del current[s]
            proj_load[p] -= 1
            lec_load[k] -= 1

    descend(0)

    best_rank: dict[int, int] = {}
    srank = ranks.student_rank
    for m in stable:
        for s, p in m.items():
            r = srank[s][p]
            if s not in best_rank or r < best_rank[s]:
                best_rank[s] = r
    return OracleResult(all_matchings=all_matchings, stable=stable, best_rank=best_rank)


def assert_agreement(inst: Instance, result: SolveResult,
                     oracle: OracleResult) -> list[str]:
    """Compare a solver run against the oracle; returns all disagreements."""
    problems: list[str] = []
    if result.solvable != oracle.solvable:
        problems.append(
            f"existence: solver says {'solvable' if result.solvable else 'unsolvable'}, "
            f"oracle found {len(oracle.stable)} strongly stable matchings")
        return problems
    if not result.solvable:
        return problems

    assert result.matching is not None
    assignment = result.matching.assignment
    for issue in check_valid(inst, assignment):
        problems.append(f"invalid output: {issue}")
    report = blocking_pairs(inst, assignment, "strong")
    for bp in report.pairs:
        problems.append(
            f"output not strongly stable: ({inst.students[bp.student]}, "
            f"{inst.projects[bp.project]}) [{bp.clause}]")

    srank = build_rank_table(inst).student_rank
    for s, p in assignment.items():
        want = oracle.best_rank.get(s)
        if want is None:
            problems.append(f"{inst.students[s]} assigned but unassigned in every stable matching")
        elif srank[s][p] != want:
            problems.append(
                f"{inst.students[s]}: rank {srank[s][p]} differs from oracle best {want}")

    assigned = frozenset(assignment)
    for m in oracle.stable:
        if frozenset(m) != assigned:
            problems.append("assigned-student set differs from an oracle stable matching")
            break
    return problems
