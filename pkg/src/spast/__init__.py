"""Student-project allocation with ties: strong stability solver and tools.

Decides whether an instance admits a strongly stable matching and, when it
does, returns the student-optimal one.  Ships independent blocking-pair
checkers for the weak, strong and super notions, a brute-force enumeration
oracle for small instances, a seeded instance generator, and a CLI.
"""

from .gen import GenParams, generate, random_valid_matching
from .instance import (Instance, InstanceParseError, InvalidInstanceError,
                       RankTable, build_rank_table, format_instance,
                       instance_from_json, instance_to_json, parse_instance,
                       validate)
from .oracle import (EnumerationBoundError, OracleResult, assert_agreement,
                     enumerate_strongly_stable)
from .quotamatch import MatchState, available_backends, set_default_backend
from .solver import (Matching, ProvisionalGraph, ReducedGraph, SolveResult,
                     SolveDiagnostics, TraceEvent, solve)
from .stability import BlockingPair, BlockingReport, blocking_pairs, check_valid, is_stable

__version__ = "0.1.0"

__all__ = [
    "GenParams", "generate", "random_valid_matching",
    "Instance", "InstanceParseError", "InvalidInstanceError", "RankTable",
    "build_rank_table", "format_instance", "instance_from_json",
    "instance_to_json", "parse_instance", "validate",
    "EnumerationBoundError", "OracleResult", "assert_agreement",
    "enumerate_strongly_stable",
    "MatchState", "available_backends", "set_default_backend",
    "Matching", "ProvisionalGraph", "ReducedGraph", "SolveResult",
    "SolveDiagnostics", "TraceEvent", "solve",
    "BlockingPair", "BlockingReport", "blocking_pairs", "check_valid", "is_stable",
]
