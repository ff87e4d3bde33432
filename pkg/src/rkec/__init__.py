"""Rooted subset k-edge-connectivity on quasi-bipartite digraphs.

A greedy approximation solver (spider stars over deficient-set rings, covered
level by level), exact brute-force oracles, and an audit harness that checks
the structural guarantees the approximation rests on.
"""

from .deficiency import CoreInfo, ExplicitSetFunction, rooted_cores, rooted_max_level
from .exact import brute_force_opt, enumerate_rooted
from .generate import GenParams, generate_instance
from .instance import (
    Edge,
    InfeasibleError,
    Instance,
    ParseError,
    SizeRefusalError,
    Solution,
    instance_to_json,
    parse_instance,
    validate_quasi_bipartite,
)
from .solver import SolveReport, harmonic, solve
from .verify import audit_run, check_feasible

__all__ = [
    "CoreInfo",
    "Edge",
    "ExplicitSetFunction",
    "GenParams",
    "InfeasibleError",
    "Instance",
    "ParseError",
    "SizeRefusalError",
    "SolveReport",
    "Solution",
    "audit_run",
    "brute_force_opt",
    "check_feasible",
    "enumerate_rooted",
    "generate_instance",
    "harmonic",
    "instance_to_json",
    "parse_instance",
    "rooted_cores",
    "rooted_max_level",
    "solve",
    "validate_quasi_bipartite",
]
