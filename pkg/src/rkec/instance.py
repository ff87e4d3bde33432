"""Problem instances, solutions, and their JSON wire formats.

An instance is a rooted digraph with per-edge nonnegative rational costs, a
terminal set, and a connectivity target k.  The zero-cost edges form the base
subgraph that is considered already paid for; the solver only ever buys
positive-cost edges.  Each multiplicity unit of a parallel edge is
independently selectable, so selections are tracked as (edge id, copy) pairs.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

Unit = tuple[int, int]  # (edge id, copy index within the edge's multiplicity)


class ParseError(ValueError):
    """An instance or solution document violates the schema or an invariant."""


class InfeasibleError(RuntimeError):
    """No edge selection can reach the connectivity target."""

    def __init__(self, terminal: int, achieved: int, required: int):
        super().__init__(
            f"terminal {terminal} reaches only {achieved} < {required} "
            f"edge-disjoint root paths even with every edge selected"
        )
        self.terminal = terminal
        self.achieved = achieved
        self.required = required


class SizeRefusalError(RuntimeError):
    """An exact computation would exceed its enumeration ceiling."""


def frac_to_str(x: Fraction) -> str:
    """Serialize a rational as "p" or "p/q" (lowest terms)."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def frac_from_obj(obj) -> Fraction:
    """Parse a rational from a JSON value: "p/q" string or plain integer."""
    if isinstance(obj, bool):
        raise ParseError(f"not a rational: {obj!r}")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        try:
            return Fraction(obj)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational: {obj!r}") from exc
    raise ParseError(f"not a rational: {obj!r}")


@dataclass(frozen=True)
class Edge:
    id: int
    tail: int
    head: int
    cost: Fraction
    mult: int = 1


@dataclass(frozen=True)
class Instance:
    """Validated, immutable problem instance.

    Invariants enforced at construction: the root is not a terminal, no edge
    enters the root, costs are nonnegative, multiplicities are positive, edge
    ids are unique, and all node ids lie in range.
    """

    node_count: int
    root: int
    terminals: frozenset[int]
    edges: tuple[Edge, ...]
    k: int

    def __post_init__(self):
        n = self.node_count
        if n < 1:
            raise ParseError("node count must be positive")
        if not 0 <= self.root < n:
            raise ParseError(f"root {self.root} out of range")
        if not self.terminals:
            raise ParseError("terminal set must be nonempty")
        for t in self.terminals:
            if not 0 <= t < n:
                raise ParseError(f"terminal {t} out of range")
        if self.root in self.terminals:
            raise ParseError("root must not be a terminal")
        if self.k < 1:
            raise ParseError("connectivity target k must be positive")
        seen = set()
        for e in self.edges:
            if e.id in seen:
                raise ParseError(f"duplicate edge id {e.id}")
            seen.add(e.id)
            if not (0 <= e.tail < n and 0 <= e.head < n):
                raise ParseError(f"edge {e.id} endpoint out of range")
            if e.head == self.root:
                raise ParseError(f"edge {e.id} enters root")
            if e.tail == e.head:
                raise ParseError(f"edge {e.id} is a self-loop")
            if e.cost < 0:
                raise ParseError(f"edge {e.id} has negative cost")
            if e.mult < 1:
                raise ParseError(f"edge {e.id} has non-positive multiplicity")

    @cached_property
    def edge_by_id(self) -> dict[int, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def zero_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.cost == 0)

    @cached_property
    def positive_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.cost > 0)

    @cached_property
    def positive_units(self) -> tuple[Unit, ...]:
        units = []
        for e in sorted(self.positive_edges, key=lambda e: e.id):
            units.extend((e.id, c) for c in range(e.mult))
        return tuple(units)

    def unit_cost(self, unit: Unit) -> Fraction:
        return self.edge_by_id[unit[0]].cost

    def unit_arc(self, unit: Unit) -> tuple[int, int]:
        e = self.edge_by_id[unit[0]]
        return e.tail, e.head

    def units_cost(self, units) -> Fraction:
        return sum((self.unit_cost(u) for u in units), Fraction(0))


@dataclass(frozen=True)
class QuasiBipartiteReport:
    ok: bool
    offending: tuple[int, ...]  # positive-cost edge ids with no end in T + root


def validate_quasi_bipartite(inst: Instance) -> QuasiBipartiteReport:
    """Check that every positive-cost edge has an end in the terminals or root.

    Zero-cost edges are exempt: the guarantee only needs the purchasable part
    of the graph to be quasi-bipartite.
    """
    anchored = set(inst.terminals) | {inst.root}
    offending = tuple(
        e.id for e in inst.positive_edges
        if e.tail not in anchored and e.head not in anchored
    )
    return QuasiBipartiteReport(not offending, offending)


def parse_instance(text: str, *, drop_root_edges: bool = False) -> Instance:
    """Parse an instance document.

    Edges entering the root never help any cut and are rejected; with
    ``drop_root_edges`` they are dropped with a warning instead.  Self-loops
    are always dropped silently.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("instance document must be a JSON object")
    try:
        n = doc["n"]
        root = doc["root"]
        terminals = doc["terminals"]
        k = doc["k"]
        raw_edges = doc["edges"]
    except KeyError as exc:
        raise ParseError(f"missing field {exc.args[0]!r}") from exc
    if not isinstance(n, int) or not isinstance(root, int) or not isinstance(k, int):
        raise ParseError("n, root and k must be integers")
    if not isinstance(terminals, list) or not all(isinstance(t, int) for t in terminals):
        raise ParseError("terminals must be a list of integers")
    if not isinstance(raw_edges, list):
        raise ParseError("edges must be a list")

    edges = []
    for rec in raw_edges:
        if not isinstance(rec, dict):
            raise ParseError("edge record must be an object")
        try:
            eid, tail, head = rec["id"], rec["tail"], rec["head"]
            cost = frac_from_obj(rec["cost"])
        except KeyError as exc:
            raise ParseError(f"edge record missing field {exc.args[0]!r}") from exc
        mult = rec.get("mult", 1)
        if not all(isinstance(v, int) for v in (eid, tail, head, mult)):
            raise ParseError("edge id, endpoints and mult must be integers")
        if tail == head:
            continue  # self-loops cover nothing
        if head == root:
            if drop_root_edges:
                warnings.warn(f"dropping edge {eid}: enters root", stacklevel=2)
                continue
            raise ParseError(f"edge {eid} enters root")
        edges.append(Edge(eid, tail, head, cost, mult))

    return Instance(n, root, frozenset(terminals), tuple(edges), k)


def instance_to_json(inst: Instance) -> str:
    doc = {
        "n": inst.node_count,
        "root": inst.root,
        "terminals": sorted(inst.terminals),
        "k": inst.k,
        "edges": [
            {"id": e.id, "tail": e.tail, "head": e.head,
             "cost": frac_to_str(e.cost), "mult": e.mult}
            for e in inst.edges
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


@dataclass(frozen=True)
class IterationRecord:
    """One greedy iteration: which star was bought and how the cores moved."""

    phase_level: int
    cores_before: int
    cores_after: int
    star_center: int  # edge id of the chosen head
    leaf_count: int
    added_cost: Fraction  # cost of the units newly added this iteration
    added_units: tuple[Unit, ...]  # exact units, for replay-style audits


@dataclass
class Solution:
    selected: dict[int, int]  # edge id -> number of units bought
    total_cost: Fraction
    connectivity: dict[int, int]  # terminal -> edge-disjoint root paths achieved
    feasible: bool
    audit: list[IterationRecord] = field(default_factory=list)

    def units(self) -> tuple[Unit, ...]:
        out = []
        for eid in sorted(self.selected):
            out.extend((eid, c) for c in range(self.selected[eid]))
        return tuple(out)


def selection_from_units(units) -> dict[int, int]:
    counts: dict[int, int] = {}
    for eid, _ in units:
        counts[eid] = counts.get(eid, 0) + 1
    return dict(sorted(counts.items()))


def _record_to_doc(rec: IterationRecord) -> dict:
    return {
        "phase_level": rec.phase_level,
        "cores_before": rec.cores_before,
        "cores_after": rec.cores_after,
        "star_center": rec.star_center,
        "leaf_count": rec.leaf_count,
        "added_cost": frac_to_str(rec.added_cost),
        "added_units": [list(u) for u in rec.added_units],
    }


def _record_from_doc(doc: dict) -> IterationRecord:
    try:
        return IterationRecord(
            phase_level=doc["phase_level"],
            cores_before=doc["cores_before"],
            cores_after=doc["cores_after"],
            star_center=doc["star_center"],
            leaf_count=doc["leaf_count"],
            added_cost=frac_from_obj(doc["added_cost"]),
            added_units=tuple((u[0], u[1]) for u in doc["added_units"]),
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ParseError(f"malformed iteration record: {exc}") from exc


def solution_to_doc(sol: Solution) -> dict:
    return {
        "selected": [[eid, sol.selected[eid]] for eid in sorted(sol.selected)],
        "total_cost": frac_to_str(sol.total_cost),
        "connectivity": {str(t): sol.connectivity[t] for t in sorted(sol.connectivity)},
        "feasible": sol.feasible,
        "audit": [_record_to_doc(r) for r in sol.audit],
    }


def solution_from_doc(doc: dict) -> Solution:
    try:
        selected = {rec[0]: rec[1] for rec in doc["selected"]}
        return Solution(
            selected=selected,
            total_cost=frac_from_obj(doc["total_cost"]),
            connectivity={int(t): v for t, v in doc["connectivity"].items()},
            feasible=bool(doc["feasible"]),
            audit=[_record_from_doc(r) for r in doc.get("audit", [])],
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ParseError(f"malformed solution: {exc}") from exc


def solution_to_json(sol: Solution) -> str:
    return json.dumps(solution_to_doc(sol), indent=2, sort_keys=True) + "\n"


def parse_solution(text: str) -> Solution:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("solution document must be a JSON object")
    return solution_from_doc(doc)
