"""Ring realization around a single core and its exact primal-dual cover.

For a core C at residual level l, the deficient sets that contain no other
core form a ring: they all contain C, and union/intersection stay inside.
The ring is never materialized.  Instead the working graph is extended with
saturating root arcs (capacity l) to every terminal of every other core,
which pushes all sets containing such terminals below the top level, plus the
candidate head edge at capacity one.  The remaining top-level sets are
exactly the ring members not already covered by the head, so each "minimal
violated set" query is one closest-cut computation at the core's
representative terminal.

The cover itself comes from dual ascent plus reverse delete.  Minimal
violated sets of a shrinking ring form a strictly increasing chain, so the
duals land on nested sets; the emitted certificate checks that chain and that
the dual total pays exactly for the surviving legs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .deficiency import CoreInfo
from .flows import Arc, FlowView, min_violated_cut
from .instance import Instance, Unit


@dataclass(frozen=True)
class RingContext:
    """Implicit ring for (core, head) over a fixed partial selection."""

    inst: Instance
    level: int
    target: CoreInfo
    head: Unit
    base_arcs: tuple[Arc, ...]  # working graph + saturating arcs + head
    candidates: tuple[Unit, ...]  # one free unit per positive edge, head's edge excluded

    def _view(self, extra_units) -> FlowView:
        arcs = list(self.base_arcs)
        for u in sorted(extra_units):
            tail, head = self.inst.unit_arc(u)
            arcs.append(Arc(tail, head, 1))
        return FlowView(self.inst.node_count, arcs)


def _working_arcs(inst: Instance, units) -> list[Arc]:
    arcs = [Arc(e.tail, e.head, e.mult) for e in inst.zero_edges]
    counts: dict[int, int] = {}
    for eid, _ in units:
        counts[eid] = counts.get(eid, 0) + 1
    for eid in sorted(counts):
        e = inst.edge_by_id[eid]
        arcs.append(Arc(e.tail, e.head, counts[eid]))
    return arcs


def saturating_arcs(inst: Instance, all_cores, target: CoreInfo, level: int) -> list[Arc]:
    """Capacity-``level`` root arcs onto every terminal of every other core.

    A saturated terminal drags every set containing it below the top level,
    and a top-level set free of other cores' terminals contains no other core,
    so exactly the target's ring survives at the top.
    """
    arcs = []
    for core in all_cores:
        if core.members == target.members:
            continue
        for t in sorted(core.members & inst.terminals):
            arcs.append(Arc(inst.root, t, level, synthetic=True))
    return arcs


def free_leg_candidates(inst: Instance, units, exclude_edge: int | None = None) -> tuple[Unit, ...]:
    """Lowest free copy of each positive edge.

    A second parallel copy can never help cover a ring (each member only needs
    one entering edge), so one candidate per edge id suffices.
    """
    taken: dict[int, int] = {}
    for eid, _ in units:
        taken[eid] = taken.get(eid, 0) + 1
    out = []
    for e in sorted(inst.positive_edges, key=lambda e: e.id):
        if e.id == exclude_edge:
            continue
        used = taken.get(e.id, 0)
        if used < e.mult:
            out.append((e.id, used))
    return tuple(out)


def build_ring_context(
    inst: Instance,
    units,
    all_cores,
    target: CoreInfo,
    head: Unit,
    level: int,
) -> RingContext:
    base = _working_arcs(inst, units)
    base.extend(saturating_arcs(inst, all_cores, target, level))
    tail, head_node = inst.unit_arc(head)
    base.append(Arc(tail, head_node, 1))  # the head rides along at cost zero
    candidates = free_leg_candidates(inst, units, exclude_edge=head[0])
    return RingContext(inst, level, target, head, tuple(base), candidates)


def min_violated_set(ctx: RingContext, legs) -> frozenset[int] | None:
    """Inclusion-minimal ring member not covered by the head or ``legs``.

    The representative terminal sits in every ring member, so one closest-cut
    query at it decides coverage: the ring is covered exactly when the cut
    value has climbed past k - level.
    """
    view = ctx._view(legs)
    bound = ctx.inst.k - ctx.level + 1
    return min_violated_cut(view, ctx.inst.root, ctx.target.representative, bound)


@dataclass(frozen=True)
class DualStep:
    raised: frozenset[int]
    amount: Fraction
    tightened: Unit


@dataclass(frozen=True)
class RingCover:
    legs: tuple[Unit, ...]
    cost: Fraction
    duals: tuple[DualStep, ...]
    certificate_ok: bool


def _certificate(ctx: RingContext, legs, duals) -> bool:
    """Strong-duality self-check: nested positive duals, each paid by exactly
    one surviving leg, dual total equal to the leg cost."""
    prev = None
    for step in duals:
        if prev is not None and not prev < step.raised:
            return False
        prev = step.raised
    total = Fraction(0)
    arcs = {u: ctx.inst.unit_arc(u) for u in legs}
    for step in duals:
        if step.amount < 0:
            return False
        if step.amount == 0:
            continue
        entering = [
            u for u, (tail, head) in arcs.items()
            if head in step.raised and tail not in step.raised
        ]
        if len(entering) != 1:
            return False
        total += step.amount
    return total == ctx.inst.units_cost(legs)


def primal_dual_ring_cover(ctx: RingContext) -> RingCover | None:
    """Exact minimum-cost legs so that legs + head cover the ring.

    Dual ascent: raise the minimal violated set until some entering candidate
    goes tight (ties to the smallest unit), add it, repeat.  Then delete
    redundant edges in reverse tightening order.  Returns None when some ring
    member has no entering candidate at all.
    """
    inst = ctx.inst
    reduced = {u: inst.unit_cost(u) for u in ctx.candidates}
    arcs = {u: inst.unit_arc(u) for u in ctx.candidates}
    tight_order: list[Unit] = []
    chosen: set[Unit] = set()
    duals: list[DualStep] = []

    while (violated := min_violated_set(ctx, chosen)) is not None:
        entering = [
            u for u in ctx.candidates
            if u not in chosen
            and arcs[u][1] in violated and arcs[u][0] not in violated
        ]
        if not entering:
            return None  # unpriceable: the ring cannot be covered from here
        eps = min(reduced[u] for u in entering)
        pick = min(u for u in entering if reduced[u] == eps)
        for u in entering:
            reduced[u] -= eps
        duals.append(DualStep(violated, eps, pick))
        tight_order.append(pick)
        chosen.add(pick)

    keep = list(tight_order)
    for u in reversed(tight_order):
        trial = [v for v in keep if v != u]
        if min_violated_set(ctx, trial) is None:
            keep = trial

    legs = tuple(sorted(keep))
    cost = inst.units_cost(legs)
    return RingCover(legs, cost, tuple(duals), _certificate(ctx, legs, duals))
