"""Data model for student-project allocation instances with tied preferences.

An instance holds students, projects and lecturers.  Each project is offered
by exactly one lecturer; projects and lecturers both carry capacities.
Students rank a subset of the projects, lecturers rank the students who find
at least one of their projects acceptable, and both kinds of list may contain
ties.  A tie of length one is stored exactly like a longer tie, so a strict
list is simply a sequence of singleton ties.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

Tie = tuple[int, ...]
TieList = tuple[Tie, ...]


class InstanceParseError(ValueError):
    """Raised when an instance file cannot be parsed or resolved."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Instance:
    """A complete allocation instance.

    Preference lists are stored as tuples of ties; each tie is a tuple of
    0-based indices sorted ascending.  Identifiers (``s1``, ``p2``, ``l1``)
    are kept for parsing and rendering; everything else works on indices.
    Instances are immutable and safe to share between concurrent solves.
    """

    students: tuple[str, ...]
    projects: tuple[str, ...]
    lecturers: tuple[str, ...]
    student_prefs: tuple[TieList, ...]
    lecturer_prefs: tuple[TieList, ...]
    project_capacity: tuple[int, ...]
    lecturer_capacity: tuple[int, ...]
    project_owner: tuple[int, ...]

    @property
    def num_students(self) -> int:
        return len(self.students)

    @property
    def num_projects(self) -> int:
        return len(self.projects)

    @property
    def num_lecturers(self) -> int:
        return len(self.lecturers)

    @property
    def total_pref_length(self) -> int:
        """Total length of all students' preference lists."""
        return sum(len(tie) for prefs in self.student_prefs for tie in prefs)

    def acceptable_projects(self, s: int) -> list[int]:
        return [p for tie in self.student_prefs[s] for p in tie]

    def lecturer_projects(self, k: int) -> list[int]:
        return [j for j, owner in enumerate(self.project_owner) if owner == k]

    def acceptable_pairs(self) -> list[tuple[int, int]]:
        return [(s, p) for s in range(self.num_students)
                for p in self.acceptable_projects(s)]


@dataclass(frozen=True)
class RankTable:
    """Precomputed rank lookups for an instance.

    ``student_rank[s][p]`` is the tie index of project ``p`` in student
    ``s``'s list (members of one tie share an index), and symmetrically for
    ``lecturer_rank``.  ``projected[(k, j)]`` is lecturer ``k``'s list
    restricted to the students who find project ``j`` acceptable, with tie
    order preserved.
    """

    student_rank: tuple[dict[int, int], ...]
    lecturer_rank: tuple[dict[int, int], ...]
    projected: dict[tuple[int, int], TieList] = field(repr=False)


def build_rank_table(inst: Instance) -> RankTable:
    """Compute rank lookups and projected lecturer lists for ``inst``."""
    student_rank: list[dict[int, int]] = []
    for prefs in inst.student_prefs:
        ranks: dict[int, int] = {}
        for tie_idx, tie in enumerate(prefs):
            for p in tie:
                ranks[p] = tie_idx
        student_rank.append(ranks)

    lecturer_rank: list[dict[int, int]] = []
    for prefs in inst.lecturer_prefs:
        ranks = {}
        for tie_idx, tie in enumerate(prefs):
            for s in tie:
                ranks[s] = tie_idx
        lecturer_rank.append(ranks)

    projected: dict[tuple[int, int], TieList] = {}
    for j, k in enumerate(inst.project_owner):
        ties: list[Tie] = []
        for tie in inst.lecturer_prefs[k]:
            kept = tuple(s for s in tie if j in student_rank[s])
            if kept:
                ties.append(kept)
        projected[(k, j)] = tuple(ties)

    return RankTable(tuple(student_rank), tuple(lecturer_rank), projected)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate(inst: Instance) -> list[str]:
    """Check every structural invariant; return all violations (empty = valid).

    Violations are data rather than exceptions so a corpus can be linted in
    one pass.
    """
    problems: list[str] = []
    n1, n2, n3 = inst.num_students, inst.num_projects, inst.num_lecturers

    owned: dict[int, list[int]] = {k: [] for k in range(n3)}
    for j, k in enumerate(inst.project_owner):
        if not 0 <= k < n3:
            problems.append(f"project {inst.projects[j]} owned by unknown lecturer index {k}")
        else:
            owned[k].append(j)
    for k in range(n3):
        if not owned[k]:
            problems.append(f"lecturer {inst.lecturers[k]} offers no project")

    for j in range(n2):
        if inst.project_capacity[j] < 1:
            problems.append(f"project {inst.projects[j]} has capacity < 1")
    for k in range(n3):
        if inst.lecturer_capacity[k] < 1:
            problems.append(f"lecturer {inst.lecturers[k]} has capacity < 1")
        if owned[k]:
            caps = [inst.project_capacity[j] for j in owned[k]]
            d = inst.lecturer_capacity[k]
            if d < max(caps):
                problems.append(
                    f"lecturer {inst.lecturers[k]}: capacity {d} below max project capacity {max(caps)}")
            if d > sum(caps):
                problems.append(
                    f"lecturer {inst.lecturers[k]}: capacity {d} above total project capacity {sum(caps)}")

    for s in range(n1):
        seen: set[int] = set()
        for tie in inst.student_prefs[s]:
            for p in tie:
                if not 0 <= p < n2:
                    problems.append(f"student {inst.students[s]} ranks unknown project index {p}")
                elif p in seen:
                    problems.append(f"student {inst.students[s]} ranks {inst.projects[p]} twice")
                seen.add(p)

    listed: list[set[int]] = []
    for k in range(n3):
        members: set[int] = set()
        for tie in inst.lecturer_prefs[k]:
            for s in tie:
                if not 0 <= s < n1:
                    problems.append(f"lecturer {inst.lecturers[k]} ranks unknown student index {s}")
                elif s in members:
                    problems.append(f"lecturer {inst.lecturers[k]} ranks {inst.students[s]} twice")
                members.add(s)
        listed.append(members)

    # L_k must contain exactly the students finding >= 1 offered project acceptable.
    for k in range(n3):
        expected = {s for s in range(n1)
                    for tie in inst.student_prefs[s] for p in tie
                    if 0 <= p < n2 and inst.project_owner[p] == k}
        for s in sorted(expected - listed[k]):
            problems.append(
                f"lecturer {inst.lecturers[k]} list incomplete: missing {inst.students[s]}")
        for s in sorted(listed[k] - expected):
            problems.append(
                f"lecturer {inst.lecturers[k]} lists {inst.students[s]} who ranks none of their projects")

    return problems


class InvalidInstanceError(ValueError):
    """Raised when an operation requires a valid instance but got violations."""

    def __init__(self, problems: list[str]) -> None:
        self.problems = problems
        super().__init__("invalid instance: " + "; ".join(problems))


def require_valid(inst: Instance) -> None:
    problems = validate(inst)
    if problems:
        raise InvalidInstanceError(problems)


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------
#
#   <n1> <n2> <n3>
#   s<i> : <pref-seq>          (n1 lines; a tie is written "(pA pB)", a
#                               singleton just "pA")
#   p<j> : <c_j> : l<k>        (n2 lines)
#   l<k> : <d_k> : <pref-seq>  (n3 lines)
#
# '#' starts a comment; blank lines are ignored.

def _tokenize_pref_seq(text: str, line_no: int) -> list[list[str]]:
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    ties: list[list[str]] = []
    current: list[str] | None = None
    for tok in tokens:
        if tok == "(":
            if current is not None:
                raise InstanceParseError("nested '(' in preference list", line_no)
            current = []
        elif tok == ")":
            if current is None:
                raise InstanceParseError("unmatched ')' in preference list", line_no)
            if not current:
                raise InstanceParseError("empty tie '()'", line_no)
            ties.append(current)
            current = None
        elif current is not None:
            current.append(tok)
        else:
            ties.append([tok])
    if current is not None:
        raise InstanceParseError("unclosed '(' in preference list", line_no)
    return ties


def parse_instance(text: str) -> Instance:
    """Parse the text instance format (or its JSON mirror) into an Instance.

    Identifiers are resolved to dense 0-based indices in declaration order.
    Raises InstanceParseError with a line number on malformed input.
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return instance_from_json(text)

    lines: list[tuple[int, str]] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((no, body))
    if not lines:
        raise InstanceParseError("empty input")

    header_no, header = lines[0]
    parts = header.split()
    if len(parts) != 3:
        raise InstanceParseError("expected header '<n1> <n2> <n3>'", header_no)
    try:
        n1, n2, n3 = (int(x) for x in parts)
    except ValueError:
        raise InstanceParseError("non-integer count in header", header_no) from None
    if min(n1, n2, n3) < 0:
        raise InstanceParseError("negative count in header", header_no)

    body_lines = lines[1:]
    if len(body_lines) != n1 + n2 + n3:
        raise InstanceParseError(
            f"expected {n1 + n2 + n3} entity lines, found {len(body_lines)}", header_no)

    student_lines = body_lines[:n1]
    project_lines = body_lines[n1:n1 + n2]
    lecturer_lines = body_lines[n1 + n2:]

    def split_fields(line: str, no: int, count: int, kind: str) -> list[str]:
        fields = [f.strip() for f in line.split(":")]
        if len(fields) != count:
            raise InstanceParseError(
                f"expected {count} ':'-separated fields on {kind} line", no)
        return fields

    students: list[str] = []
    raw_student_prefs: list[tuple[int, list[list[str]]]] = []
    for no, line in student_lines:
        name, prefs = split_fields(line, no, 2, "student")
        if not name.startswith("s"):
            raise InstanceParseError(f"expected student identifier, got {name!r}", no)
        if name in students:
            raise InstanceParseError(f"duplicate student {name}", no)
        students.append(name)
        raw_student_prefs.append((no, _tokenize_pref_seq(prefs, no)))

    projects: list[str] = []
    project_capacity: list[int] = []
    raw_owner: list[tuple[int, str]] = []
    for no, line in project_lines:
        name, cap, owner = split_fields(line, no, 3, "project")
        if not name.startswith("p"):
            raise InstanceParseError(f"expected project identifier, got {name!r}", no)
        if name in projects:
            raise InstanceParseError(f"duplicate project {name}", no)
        try:
            capacity = int(cap)
        except ValueError:
            raise InstanceParseError(f"missing or bad capacity for {name}", no) from None
        projects.append(name)
        project_capacity.append(capacity)
        raw_owner.append((no, owner))

    lecturers: list[str] = []
    lecturer_capacity: list[int] = []
    raw_lecturer_prefs: list[tuple[int, list[list[str]]]] = []
    for no, line in lecturer_lines:
        name, cap, prefs = split_fields(line, no, 3, "lecturer")
        if not name.startswith("l"):
            raise InstanceParseError(f"expected lecturer identifier, got {name!r}", no)
        if name in lecturers:
            raise InstanceParseError(f"duplicate lecturer {name}", no)
        try:
            capacity = int(cap)
        except ValueError:
            raise InstanceParseError(f"missing or bad capacity for {name}", no) from None
        lecturers.append(name)
        lecturer_capacity.append(capacity)
        raw_lecturer_prefs.append((no, _tokenize_pref_seq(prefs, no)))

    project_index = {name: j for j, name in enumerate(projects)}
    student_index = {name: s for s, name in enumerate(students)}
    lecturer_index = {name: k for k, name in enumerate(lecturers)}

    def resolve_ties(raw: list[list[str]], index: dict[str, int], no: int) -> TieList:
        ties: list[Tie] = []
        seen: set[int] = set()
        for tie in raw:
            members: list[int] = []
            for tok in tie:
                if tok not in index:
                    raise InstanceParseError(f"unknown identifier {tok!r}", no)
                idx = index[tok]
                if idx in seen:
                    raise InstanceParseError(f"duplicate preference entry {tok!r}", no)
                seen.add(idx)
                members.append(idx)
            ties.append(tuple(sorted(members)))
        return tuple(ties)

    student_prefs = tuple(resolve_ties(raw, project_index, no)
                          for no, raw in raw_student_prefs)
    lecturer_prefs = tuple(resolve_ties(raw, student_index, no)
                           for no, raw in raw_lecturer_prefs)
    project_owner = []
    for no, owner in raw_owner:
        if owner not in lecturer_index:
            raise InstanceParseError(f"unknown identifier {owner!r}", no)
        project_owner.append(lecturer_index[owner])

    return Instance(
        students=tuple(students),
        projects=tuple(projects),
        lecturers=tuple(lecturers),
        student_prefs=student_prefs,
        lecturer_prefs=lecturer_prefs,
        project_capacity=tuple(project_capacity),
        lecturer_capacity=tuple(lecturer_capacity),
        project_owner=tuple(project_owner),
    )


def _format_pref_seq(ties: TieList, names: tuple[str, ...]) -> str:
    parts = []
    for tie in ties:
        if len(tie) == 1:
            parts.append(names[tie[0]])
        else:
            parts.append("(" + " ".join(names[i] for i in tie) + ")")
    return " ".join(parts)


def format_instance(inst: Instance) -> str:
    """Render an Instance in the text format; inverse of parse_instance."""
    out = [f"{inst.num_students} {inst.num_projects} {inst.num_lecturers}"]
    for s in range(inst.num_students):
        out.append(f"{inst.students[s]} : {_format_pref_seq(inst.student_prefs[s], inst.projects)}")
    for j in range(inst.num_projects):
        out.append(f"{inst.projects[j]} : {inst.project_capacity[j]} : {inst.lecturers[inst.project_owner[j]]}")
    for k in range(inst.num_lecturers):
        out.append(f"{inst.lecturers[k]} : {inst.lecturer_capacity[k]} : "
                   f"{_format_pref_seq(inst.lecturer_prefs[k], inst.students)}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# JSON mirror
# ---------------------------------------------------------------------------

def instance_to_json(inst: Instance) -> str:
    doc = {
        "students": list(inst.students),
        "projects": list(inst.projects),
        "lecturers": list(inst.lecturers),
        "student_prefs": {
            inst.students[s]: [[inst.projects[p] for p in tie] for tie in prefs]
            for s, prefs in enumerate(inst.student_prefs)
        },
        "lecturer_prefs": {
            inst.lecturers[k]: [[inst.students[s] for s in tie] for tie in prefs]
            for k, prefs in enumerate(inst.lecturer_prefs)
        },
        "project_capacity": {inst.projects[j]: c for j, c in enumerate(inst.project_capacity)},
        "lecturer_capacity": {inst.lecturers[k]: d for k, d in enumerate(inst.lecturer_capacity)},
        "project_owner": {inst.projects[j]: inst.lecturers[k]
                          for j, k in enumerate(inst.project_owner)},
    }
    return json.dumps(doc, indent=2)


def instance_from_json(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(f"bad JSON: {exc}") from None

    try:
        students = tuple(doc["students"])
        projects = tuple(doc["projects"])
        lecturers = tuple(doc["lecturers"])
        s_index = {name: i for i, name in enumerate(students)}
        p_index = {name: i for i, name in enumerate(projects)}
        l_index = {name: i for i, name in enumerate(lecturers)}

        def lookup(index: dict[str, int], name: str) -> int:
            if name not in index:
                raise InstanceParseError(f"unknown identifier {name!r}")
            return index[name]

        student_prefs = tuple(
            tuple(tuple(sorted(lookup(p_index, p) for p in tie)) for tie in doc["student_prefs"][name])
            for name in students)
        lecturer_prefs = tuple(
            tuple(tuple(sorted(lookup(s_index, s) for s in tie)) for tie in doc["lecturer_prefs"][name])
            for name in lecturers)
        project_capacity = tuple(int(doc["project_capacity"][name]) for name in projects)
        lecturer_capacity = tuple(int(doc["lecturer_capacity"][name]) for name in lecturers)
        project_owner = tuple(lookup(l_index, doc["project_owner"][name]) for name in projects)
    except InstanceParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceParseError(f"malformed instance JSON: {exc}") from None

    return Instance(students, projects, lecturers, student_prefs, lecturer_prefs,
                    project_capacity, lecturer_capacity, project_owner)
