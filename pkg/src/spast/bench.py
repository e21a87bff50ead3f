"""Wall-time benchmark of the solver across instance sizes and backends.

Sizes are stated as the total preference-list length m; instances are
generated at fixed density (preference lists of length 10, two students per
project).  The same instances are solved with each requested backend so the
compiled kernel and the pure-Python fallback can be compared directly.
"""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass

from .gen import GenParams, generate
from .quotamatch import available_backends, resolve_backend
from .solver import solve

PREF_LEN = 10


@dataclass(frozen=True)
class BenchRow:
    m: int
    backend: str
    median_seconds: float
    solvable: bool


def params_for_m(m: int, seed: int = 0) -> GenParams:
    """Fixed-density generator parameters hitting a total list length of m."""
    n1 = max(2, m // PREF_LEN)
    n2 = max(PREF_LEN, n1 // 2)
    n3 = max(2, n2 // 10)
    return GenParams(n1=n1, n2=n2, n3=n3,
                     pref_len_min=PREF_LEN, pref_len_max=PREF_LEN,
                     tie_probability=0.3, cap_min=1, cap_max=3, seed=seed)


def run_bench(sizes: list[int], reps: int = 3, seed: int = 0,
              backends: list[str] | None = None) -> list[BenchRow]:
    if backends is None:
        backends = list(available_backends())
    rows: list[BenchRow] = []
    for m in sizes:
        instances = [generate(params_for_m(m, seed + rep)) for rep in range(reps)]
        for backend in backends:
            resolve_backend(backend)
            times = []
            solvable = False
            for inst in instances:
                start = time.perf_counter()
                result = solve(inst, backend=backend, check_instance=False)
                times.append(time.perf_counter() - start)
                solvable = solvable or result.solvable
            rows.append(BenchRow(m=m, backend=backend,
                                 median_seconds=statistics.median(times),
                                 solvable=solvable))
    return rows


def loglog_slope(rows: list[BenchRow], backend: str) -> float:
    """Least-squares slope of log(time) against log(m) for one backend."""
    points = [(math.log(r.m), math.log(r.median_seconds))
              for r in rows if r.backend == backend and r.median_seconds > 0]
    n = len(points)
    if n < 2:
        return 0.0
    mean_x = sum(x for x, _ in points) / n
    mean_y = sum(y for _, y in points) / n
    num = sum((x - mean_x) * (y - mean_y) for x, y in points)
    den = sum((x - mean_x) ** 2 for x, _ in points)
    return num / den
