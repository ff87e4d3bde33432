"""Deficiency oracles: residual max level, cores, and explicit set functions.

Two backends answer the same queries.  The rooted backend reads deficiencies
off the instance with max-flow: the deficiency of a terminal t under a partial
selection I is max(k - lambda(root, t), 0) in the working graph, and the
tightest witness set around t is the closest-to-t minimum cut.  The explicit
backend stores a set function as a sparse table and answers by scanning it; it
exists to cross-check the rooted backend and to exercise the generic theory
(terminal-anchored supermodularity surviving residuals).

Both backends share the contract: max level is non-increasing as the
selection grows, cores are returned exactly when the max level is positive,
and cores are pairwise terminal-disjoint.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

from .flows import closest_sink_cut, instance_view
from .instance import Instance, ParseError


@dataclass(frozen=True)
class CoreInfo:
    """An inclusion-minimal maximum-deficiency set with a witness terminal."""

    members: frozenset[int]
    representative: int  # smallest terminal inside; representation only
    deficiency: int


def rooted_cut_data(inst: Instance, units) -> dict[int, tuple[int, frozenset[int]]]:
    """Per terminal: (edge-disjoint path count, closest minimum-cut sink side)."""
    view = instance_view(inst, units)
    return {t: closest_sink_cut(view, inst.root, t) for t in sorted(inst.terminals)}


def rooted_max_level(inst: Instance, units) -> int:
    """Maximum residual deficiency over all terminal-containing sets."""
    data = rooted_cut_data(inst, units)
    return max(max(inst.k - lam, 0) for lam, _ in data.values())


def rooted_cores(inst: Instance, units) -> list[CoreInfo]:
    """Inclusion-minimal sets of maximum residual deficiency.

    Candidates are the closest-cut sink sides of the terminals attaining the
    max level; identical sets are merged and any candidate strictly containing
    another is discarded.  Every terminal inside a surviving core attains the
    max level, so the representative is just the smallest one.
    """
    data = rooted_cut_data(inst, units)
    level = max(max(inst.k - lam, 0) for lam, _ in data.values())
    if level == 0:
        return []
    candidates: set[frozenset[int]] = set()
    for t, (lam, side) in data.items():
        if inst.k - lam == level:
            candidates.add(side)
    kept = [
        side for side in candidates
        if not any(other < side for other in candidates)
    ]
    cores = [
        CoreInfo(side, min(side & inst.terminals), level)
        for side in kept
    ]
    cores.sort(key=lambda c: c.representative)
    return cores


_EXPLICIT_UNIVERSE_CAP = 20


@dataclass(frozen=True)
class ExplicitSetFunction:
    """Sparse table of a nonnegative set function on nodes 0..universe-1.

    Entries with value zero are dropped.  Construction verifies the shape the
    solver relies on: every positive set contains a terminal, and for any two
    positive sets sharing a terminal the supermodular inequality
    f(A) + f(B) <= f(A & B) + f(A | B) holds.
    """

    universe: int
    terminals: frozenset[int]
    table: tuple[tuple[frozenset[int], int], ...]

    def __post_init__(self):
        if not 1 <= self.universe <= _EXPLICIT_UNIVERSE_CAP:
            raise ParseError(f"universe size must be in 1..{_EXPLICIT_UNIVERSE_CAP}")
        for t in self.terminals:
            if not 0 <= t < self.universe:
                raise ParseError(f"terminal {t} out of range")
        seen = set()
        cleaned = []
        for members, value in self.table:
            if value < 0:
                raise ParseError("set function values must be nonnegative")
            if value == 0:
                continue
            if not members <= frozenset(range(self.universe)):
                raise ParseError("table set out of range")
            if members in seen:
                raise ParseError("duplicate table entry")
            seen.add(members)
            if not members & self.terminals:
                raise ParseError("positive set contains no terminal")
            cleaned.append((members, value))
        cleaned.sort(key=lambda kv: (sorted(kv[0]), kv[1]))
        object.__setattr__(self, "table", tuple(cleaned))
        self._check_supermodular()

    def _check_supermodular(self):
        entries = self.table
        lookup = dict(entries)
        for i, (a, fa) in enumerate(entries):
            for b, fb in entries[i + 1:]:
                if not (a & b & self.terminals):
                    continue
                if fa + fb > lookup.get(a & b, 0) + lookup.get(a | b, 0):
                    raise ParseError(
                        f"supermodular inequality fails for {sorted(a)} and {sorted(b)}"
                    )

    @cached_property
    def _lookup(self) -> dict[frozenset[int], int]:
        return dict(self.table)

    def value(self, members) -> int:
        return self._lookup.get(frozenset(members), 0)

    def is_positive(self, members) -> bool:
        return self.value(members) > 0

    def residual(self, arcs) -> "ExplicitSetFunction":
        """Residual function after arcs; re-runs the constructor checks."""
        table = tuple(
            (members, max(value - _entering(arcs, members), 0))
            for members, value in self.table
        )
        return ExplicitSetFunction(self.universe, self.terminals, table)


def _entering(arcs, members) -> int:
    return sum(1 for tail, head in arcs if head in members and tail not in members)


def explicit_max_level(fn: ExplicitSetFunction, arcs) -> int:
    arcs = tuple(arcs)
    best = 0
    for members, value in fn.table:
        best = max(best, value - _entering(arcs, members))
    return max(best, 0)


def explicit_cores(fn: ExplicitSetFunction, arcs) -> list[CoreInfo]:
    arcs = tuple(arcs)
    level = explicit_max_level(fn, arcs)
    if level == 0:
        return []
    at_level = [
        members for members, value in fn.table
        if value - _entering(arcs, members) == level
    ]
    kept = [m for m in at_level if not any(other < m for other in at_level)]
    cores = [CoreInfo(m, min(m & fn.terminals), level) for m in kept]
    cores.sort(key=lambda c: (c.representative, sorted(c.members)))
    return cores


def tabulate_rooted(inst: Instance, units=()) -> ExplicitSetFunction:
    """Tabulate the rooted deficiency function over all root-free subsets.

    Only usable at enumeration scale; the result feeds the explicit backend so
    the two can be compared on identical inputs.
    """
    ground = [v for v in range(inst.node_count) if v != inst.root]
    if inst.node_count > _EXPLICIT_UNIVERSE_CAP:
        raise ParseError("instance too large to tabulate")
    arcs = _instance_arcs(inst, units)
    entries = []
    for mask in range(1, 1 << len(ground)):
        members = frozenset(ground[i] for i in range(len(ground)) if mask >> i & 1)
        if not members & inst.terminals:
            continue
        value = max(inst.k - _entering(arcs, members), 0)
        if value:
            entries.append((members, value))
    return ExplicitSetFunction(inst.node_count, inst.terminals, tuple(entries))


def _instance_arcs(inst: Instance, units) -> tuple[tuple[int, int], ...]:
    arcs = []
    for e in inst.zero_edges:
        arcs.extend([(e.tail, e.head)] * e.mult)
    arcs.extend(inst.unit_arc(u) for u in units)
    return tuple(arcs)


def load_explicit(text: str) -> ExplicitSetFunction:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    try:
        return ExplicitSetFunction(
            universe=doc["universe"],
            terminals=frozenset(doc["terminals"]),
            table=tuple(
                (frozenset(rec["set"]), rec["value"]) for rec in doc["entries"]
            ),
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed set function table: {exc}") from exc


def explicit_to_json(fn: ExplicitSetFunction) -> str:
    doc = {
        "universe": fn.universe,
        "terminals": sorted(fn.terminals),
        "entries": [
            {"set": sorted(members), "value": value} for members, value in fn.table
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
