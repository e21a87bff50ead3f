"""Seeded random instance generator.

Instances are valid by construction: projects are partitioned so every
lecturer owns at least one, lecturer lists are derived from the student lists
rather than sampled, and lecturer capacities are drawn inside the legal
interval [max project capacity, total project capacity].
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .instance import Instance


@dataclass(frozen=True)
class GenParams:
    n1: int
    n2: int
    n3: int
    pref_len_min: int = 1
    pref_len_max: int = 3
    tie_probability: float = 0.0  # chance an item joins the previous tie
    cap_min: int = 1
    cap_max: int = 1
    seed: int = 0

    def check(self) -> None:
        if self.n1 < 0 or self.n2 < 1 or self.n3 < 1:
            raise ValueError("need n1 >= 0, n2 >= 1, n3 >= 1")
        if self.n3 > self.n2:
            raise ValueError("every lecturer must own a project: n3 <= n2 required")
        if not 1 <= self.pref_len_min <= self.pref_len_max:
            raise ValueError("need 1 <= pref_len_min <= pref_len_max")
        if self.pref_len_max > self.n2:
            raise ValueError("pref_len_max exceeds the number of projects")
        if not 0.0 <= self.tie_probability <= 1.0:
            raise ValueError("tie_probability must be within [0, 1]")
        if not 1 <= self.cap_min <= self.cap_max:
            raise ValueError("need 1 <= cap_min <= cap_max")


def _tie_up(items: list[int], tie_probability: float, rng: random.Random) -> tuple[tuple[int, ...], ...]:
    ties: list[list[int]] = []
    for item in items:
        if ties and tie_probability > 0 and rng.random() < tie_probability:
            ties[-1].append(item)
        else:
            ties.append([item])
    return tuple(tuple(sorted(tie)) for tie in ties)


def generate(params: GenParams) -> Instance:
    """Deterministic function of params (seed included) to a valid Instance."""
    params.check()
    rng = random.Random(params.seed)
    n1, n2, n3 = params.n1, params.n2, params.n3

    owners = list(range(n3)) + [rng.randrange(n3) for _ in range(n2 - n3)]
    rng.shuffle(owners)

    project_capacity = [rng.randint(params.cap_min, params.cap_max) for _ in range(n2)]

    student_prefs = []
    for _ in range(n1):
        length = rng.randint(params.pref_len_min, params.pref_len_max)
        listed = rng.sample(range(n2), length)
        student_prefs.append(_tie_up(listed, params.tie_probability, rng))

    lecturer_prefs = []
    lecturer_capacity = []
    for k in range(n3):
        owned = [j for j in range(n2) if owners[j] == k]
        members = sorted(
            s for s in range(n1)
            if any(owners[p] == k for tie in student_prefs[s] for p in tie))
        rng.shuffle(members)
        lecturer_prefs.append(_tie_up(members, params.tie_probability, rng))
        low = max(project_capacity[j] for j in owned)
        high = sum(project_capacity[j] for j in owned)
        lecturer_capacity.append(rng.randint(low, high))

    return Instance(
        students=tuple(f"s{i + 1}" for i in range(n1)),
        projects=tuple(f"p{j + 1}" for j in range(n2)),
        lecturers=tuple(f"l{k + 1}" for k in range(n3)),
        student_prefs=tuple(student_prefs),
        lecturer_prefs=tuple(lecturer_prefs),
        project_capacity=tuple(project_capacity),
        lecturer_capacity=tuple(lecturer_capacity),
        project_owner=tuple(owners),
    )


def random_valid_matching(inst: Instance, seed: int = 0) -> dict[int, int]:
    """A random capacity-respecting matching; used by the checker tests."""
    rng = random.Random(seed)
    proj_load = [0] * inst.num_projects
    lec_load = [0] * inst.num_lecturers
    assignment: dict[int, int] = {}
    students = list(range(inst.num_students))
    rng.shuffle(students)
    for s in students:
        options = [None] + [p for p in inst.acceptable_projects(s)
                            if proj_load[p] < inst.project_capacity[p]
                            and lec_load[inst.project_owner[p]] < inst.lecturer_capacity[inst.project_owner[p]]]
        choice = rng.choice(options)
        if choice is None:
            continue
        assignment[s] = choice
        proj_load[choice] += 1
        lec_load[inst.project_owner[choice]] += 1
    return assignment
