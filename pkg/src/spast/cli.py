"""Command-line front end: solve, check, oracle, gen and bench subcommands.

Exit codes: 0 when a matching is found or a check comes back clean, 1 when
no strongly stable matching exists or blocking pairs were found, 2 on input
or usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .gen import GenParams, generate
from .instance import (Instance, InstanceParseError, format_instance,
                       instance_to_json, parse_instance, validate)
from .oracle import EnumerationBoundError, enumerate_strongly_stable
from .quotamatch import available_backends
from .solver import Matching, solve
from .stability import NOTIONS, blocking_pairs, check_valid
from . import bench as bench_mod

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT_ERROR = 2

NO_MATCHING_LINE = "no strongly stable matching exists"


class _CliError(Exception):
    pass


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise _CliError(f"cannot read {path}: {exc}") from None


def _load_instance(path: str) -> Instance:
    try:
        inst = parse_instance(_read_input(path))
    except InstanceParseError as exc:
        raise _CliError(f"{path}: {exc}") from None
    problems = validate(inst)
    if problems:
        raise _CliError(f"{path}: invalid instance: " + "; ".join(problems))
    return inst


def _parse_matching_text(inst: Instance, text: str) -> dict[int, int]:
    s_index = {name: i for i, name in enumerate(inst.students)}
    p_index = {name: i for i, name in enumerate(inst.projects)}
    assignment: dict[int, int] = {}
    stripped = text.lstrip()
    if stripped.startswith("{") or stripped.startswith("["):
        doc = json.loads(text)
        pairs = doc.get("matching", doc) if isinstance(doc, dict) else doc
        if pairs is None:
            return {}
        items = pairs.items() if isinstance(pairs, dict) else pairs
        for s_name, p_name in items:
            if s_name not in s_index or p_name not in p_index:
                raise _CliError(f"unknown identifier in matching: {s_name} {p_name}")
            assignment[s_index[s_name]] = p_index[p_name]
        return assignment
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body or body == NO_MATCHING_LINE:
            continue
        parts = body.split()
        if len(parts) != 2:
            raise _CliError(f"matching line {no}: expected 's<i> p<j>'")
        s_name, p_name = parts
        if s_name not in s_index or p_name not in p_index:
            raise _CliError(f"matching line {no}: unknown identifier")
        if s_index[s_name] in assignment:
            raise _CliError(f"matching line {no}: student {s_name} assigned twice")
        assignment[s_index[s_name]] = p_index[p_name]
    return assignment


def _matching_lines(inst: Instance, matching: Matching) -> list[str]:
    return [f"{inst.students[s]} {inst.projects[p]}" for s, p in matching.pairs()]


def _trace_lines(inst: Instance, trace) -> list[str]:
    lines = []
    for ev in trace:
        if ev.kind == "apply":
            lines.append(f"apply {inst.students[ev.student]} {inst.projects[ev.project]}")
        elif ev.kind == "delete":
            lines.append(f"delete {inst.students[ev.student]} {inst.projects[ev.project]} {ev.reason}")
        elif ev.kind == "critical-set":
            members = ",".join(sorted((inst.students[s] for s in ev.students),
                                      key=lambda n: (len(n), n)))
            lines.append(f"critical-set round={ev.round} {{{members}}}")
        elif ev.kind == "pr-star":
            members = ",".join(sorted((inst.projects[j] for j in ev.projects),
                                      key=lambda n: (len(n), n)))
            lines.append(f"pr-star {{{members}}}")
    return lines


def _cmd_solve(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    result = solve(inst, backend=args.backend, check_instance=False)
    if args.format == "json":
        doc: dict = {"outcome": "strongly-stable" if result.solvable
                     else "no-strongly-stable-matching"}
        if result.matching is not None:
            doc["matching"] = [[inst.students[s], inst.projects[p]]
                               for s, p in result.matching.pairs()]
        if args.trace:
            doc["trace"] = _trace_lines(inst, result.trace)
        print(json.dumps(doc, indent=2))
    else:
        if args.trace:
            for line in _trace_lines(inst, result.trace):
                print(line)
        if result.matching is not None:
            for line in _matching_lines(inst, result.matching):
                print(line)
        else:
            print(NO_MATCHING_LINE)
    return EXIT_OK if result.solvable else EXIT_NEGATIVE


def _cmd_check(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    assignment = _parse_matching_text(inst, _read_input(args.matching))
    problems = check_valid(inst, assignment)
    report = blocking_pairs(inst, assignment, args.notion)
    if args.format == "json":
        print(json.dumps({
            "notion": args.notion,
            "violations": problems,
            "blocking": [[inst.students[bp.student], inst.projects[bp.project], bp.clause]
                         for bp in report.pairs],
        }, indent=2))
    else:
        for problem in problems:
            print(f"invalid: {problem}")
        for bp in report.pairs:
            print(f"({inst.students[bp.student]}, {inst.projects[bp.project]}) [{bp.clause}]")
    return EXIT_NEGATIVE if problems or report.pairs else EXIT_OK


def _cmd_oracle(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    try:
        result = enumerate_strongly_stable(inst, max_states=args.max_enum)
    except EnumerationBoundError as exc:
        raise _CliError(str(exc)) from None
    if args.format == "json":
        print(json.dumps({
            "stable": [[[inst.students[s], inst.projects[p]] for s, p in sorted(m.items())]
                       for m in result.stable],
            "valid_matchings": len(result.all_matchings),
        }, indent=2))
    else:
        for m in result.stable:
            print(" ".join(f"{inst.students[s]}:{inst.projects[p]}"
                           for s, p in sorted(m.items())))
    return EXIT_OK if result.solvable else EXIT_NEGATIVE


def _cmd_gen(args: argparse.Namespace) -> int:
    params = GenParams(n1=args.n1, n2=args.n2, n3=args.n3,
                       pref_len_min=args.pref_min, pref_len_max=args.pref_max,
                       tie_probability=args.tie_prob,
                       cap_min=args.cap_min, cap_max=args.cap_max,
                       seed=args.seed)
    try:
        inst = generate(params)
    except ValueError as exc:
        raise _CliError(str(exc)) from None
    if args.format == "json":
        print(instance_to_json(inst))
    else:
        sys.stdout.write(format_instance(inst))
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace) -> int:
    sizes = [int(x) for x in args.sizes.split(",") if x]
    backends = list(available_backends()) if args.backend == "both" else [args.backend]
    rows = bench_mod.run_bench(sizes, reps=args.reps, seed=args.seed, backends=backends)
    for row in rows:
        print(f"m={row.m} backend={row.backend} median={row.median_seconds:.4f}s")
    for backend in backends:
        if sum(1 for r in rows if r.backend == backend) >= 2:
            print(f"slope backend={backend} {bench_mod.loglog_slope(rows, backend):.3f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spast",
        description="Student-project allocation with ties under strong stability.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("text", "json"), default="text")

    p_solve = sub.add_parser("solve", help="solve an instance file ('-' for stdin)")
    p_solve.add_argument("instance")
    p_solve.add_argument("--trace", action="store_true",
                         help="emit the deletion/critical-set event log")
    p_solve.add_argument("--backend", choices=("auto",) + available_backends(),
                         default=None)
    add_common(p_solve)

    p_check = sub.add_parser("check", help="report blocking pairs of a matching")
    p_check.add_argument("instance")
    p_check.add_argument("matching")
    p_check.add_argument("--notion", choices=NOTIONS, default="strong")
    add_common(p_check)

    p_oracle = sub.add_parser("oracle", help="enumerate all strongly stable matchings")
    p_oracle.add_argument("instance")
    p_oracle.add_argument("--max-enum", type=int, default=10 ** 7)
    add_common(p_oracle)

    p_gen = sub.add_parser("gen", help="generate a random valid instance")
    p_gen.add_argument("--n1", type=int, default=8)
    p_gen.add_argument("--n2", type=int, default=6)
    p_gen.add_argument("--n3", type=int, default=3)
    p_gen.add_argument("--pref-min", type=int, default=1)
    p_gen.add_argument("--pref-max", type=int, default=3)
    p_gen.add_argument("--tie-prob", type=float, default=0.3)
    p_gen.add_argument("--cap-min", type=int, default=1)
    p_gen.add_argument("--cap-max", type=int, default=2)
    p_gen.add_argument("--seed", type=int, default=0)
    add_common(p_gen)

    p_bench = sub.add_parser("bench", help="time the solver across sizes")
    p_bench.add_argument("--sizes", default="1000,2000,4000,8000",
                         help="comma-separated total preference-list lengths")
    p_bench.add_argument("--reps", type=int, default=3)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--backend", choices=("both",) + available_backends(),
                         default="both")
    add_common(p_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "solve": _cmd_solve,
        "check": _cmd_check,
        "oracle": _cmd_oracle,
        "gen": _cmd_gen,
        "bench": _cmd_bench,
    }
    try:
        return handlers[args.command](args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except json.JSONDecodeError as exc:
        print(f"error: bad JSON input: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
