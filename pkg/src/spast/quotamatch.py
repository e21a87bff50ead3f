"""Quota-constrained bipartite matching with selectable kernel backend.

The augmenting-path search is the hot loop of the whole solver, so it exists
twice: ``spast._augment`` is a compiled extension and ``spast._augment_py``
is a pure-Python fallback with identical behaviour.  The compiled kernel is
used when it imported successfully; set ``SPAST_BACKEND=pure`` (or call
``set_default_backend``) to force the fallback, e.g. for benchmarking.
"""

from __future__ import annotations

import os
from array import array

from . import _augment_py

try:  # compiled extension is optional
    from . import _augment as _augment_fast
except ImportError:  # pragma: no cover - depends on build environment
    _augment_fast = None

_BACKENDS = {"pure": _augment_py}
if _augment_fast is not None:
    _BACKENDS["fast"] = _augment_fast

_default_backend = os.environ.get("SPAST_BACKEND", "auto")


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def resolve_backend(name: str | None = None) -> str:
    name = name or _default_backend
    if name == "auto":
        return "fast" if "fast" in _BACKENDS else "pure"
    if name not in _BACKENDS:
        raise ValueError(f"unknown matching backend {name!r}; have {available_backends()}")
    return name


def set_default_backend(name: str) -> None:
    """Set the process-wide default backend ('auto', 'fast' or 'pure')."""
    global _default_backend
    if name != "auto":
        resolve_backend(name)
    _default_backend = name


class MatchState:
    """Mutable matching over students with unit capacity and quota projects.

    ``adjacency[s]`` lists the projects student ``s`` may take.  Projects may
    optionally be grouped under lecturers (``owner`` + ``lecturer_caps``),
    in which case augmenting paths keep every lecturer within its quota.
    ``augment`` accepts per-call project masks: ``allowed`` restricts which
    projects may be used at all, ``locked`` marks projects whose current load
    must never decrease (their students may still be swapped one-for-one).
    """

    def __init__(
        self,
        adjacency: list[list[int]],
        project_caps: list[int],
        owner: list[int] | None = None,
        lecturer_caps: list[int] | None = None,
        backend: str | None = None,
    ) -> None:
        n_students = len(adjacency)
        n_projects = len(project_caps)
        if owner is None:
            # Single unbounded lecturer: the lecturer layer never binds.
            owner = [0] * n_projects
            lecturer_caps = [sum(project_caps) + 1]
        assert lecturer_caps is not None
        n_lecturers = len(lecturer_caps)

        self.n_students = n_students
        self.n_projects = n_projects
        self.n_lecturers = n_lecturers
        self.backend = resolve_backend(backend)
        self._kernel = _BACKENDS[self.backend]

        indices: list[int] = []
        indptr = [0]
        for adj in adjacency:
            indices.extend(adj)
            indptr.append(len(indices))
        self._adj_indptr = array("i", indptr)
        self._adj_indices = array("i", indices or [0])

        lec_projects: list[list[int]] = [[] for _ in range(n_lecturers)]
        for j, k in enumerate(owner):
            lec_projects[k].append(j)
        lptr = [0]
        lind: list[int] = []
        for projs in lec_projects:
            lind.extend(projs)
            lptr.append(len(lind))
        self._lec_indptr = array("i", lptr)
        self._lec_indices = array("i", lind or [0])

        self._assign = array("i", [-1] * n_students) if n_students else array("i")
        self._proj_load = array("i", bytes(4 * n_projects))
        self._proj_cap = array("i", project_caps) if n_projects else array("i")
        self._owner = array("i", owner) if n_projects else array("i")
        self._lec_load = array("i", bytes(4 * n_lecturers))
        self._lec_cap = array("i", lecturer_caps)

        start = [0]
        for c in project_caps:
            start.append(start[-1] + c)
        self._pslot_start = array("i", start)
        self._pslot = array("i", bytes(4 * max(start[-1], 1)))
        self._sslot = array("i", bytes(4 * max(n_students, 1)))

        self._all_allowed = bytearray([1] * n_projects)
        self._none_locked = bytearray(n_projects)

    def set_assignment(self, pairs: dict[int, int]) -> None:
        """Seed the matching; silently skips pairs that would exceed a quota."""
        for s, p in pairs.items():
            if self._assign[s] != -1:
                continue
            k = self._owner[p]
            if self._proj_load[p] >= self._proj_cap[p] or self._lec_load[k] >= self._lec_cap[k]:
                continue
            self._assign[s] = p
            self._pslot[self._pslot_start[p] + self._proj_load[p]] = s
            self._sslot[s] = self._proj_load[p]
            self._proj_load[p] += 1
            self._lec_load[k] += 1

    def augment(
        self,
        students: list[int] | range | None = None,
        allowed: set[int] | None = None,
        locked: set[int] | None = None,
    ) -> int:
        """Run augmenting searches for each free student; return #matched."""
        if students is None:
            students = range(self.n_students)
        if allowed is None:
            allowed_mask = self._all_allowed
        else:
            allowed_mask = bytearray(self.n_projects)
            for j in allowed:
                allowed_mask[j] = 1
        if locked is None:
            locked_mask = self._none_locked
        else:
            locked_mask = bytearray(self.n_projects)
            for j in locked:
                locked_mask[j] = 1
        return self._kernel.augment_students(
            list(students),
            self._adj_indptr, self._adj_indices,
            self._lec_indptr, self._lec_indices,
            self._assign, self._proj_load, self._proj_cap, self._owner,
            self._lec_load, self._lec_cap,
            self._pslot_start, self._pslot, self._sslot,
            allowed_mask, locked_mask,
        )

    def assignment(self) -> list[int]:
        """Current assignment as a list: project index or -1 per student."""
        return list(self._assign)

    def project_load(self, j: int) -> int:
        return self._proj_load[j]

    def matched_students(self, j: int) -> list[int]:
        base = self._pslot_start[j]
        return [self._pslot[base + i] for i in range(self._proj_load[j])]

    @property
    def size(self) -> int:
        return sum(1 for p in self._assign if p != -1)
