"""One phase of the solver: price stars, pick the densest, repeat.

A star is a head edge plus, per leaf core, a minimum-cost leg set that
together with the head covers that core's ring.  The phase repeatedly buys
the star minimizing (head cost + leg costs) / leaf count until no core is
left at the phase's level.  Leg sets of different leaves may overlap; the
duplicates are bought once but the density keeps the summed price, which only
makes the chosen star look worse, never infeasible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .deficiency import CoreInfo, rooted_cores, rooted_max_level
from .instance import Instance, IterationRecord, Unit
from .rings import RingCover, build_ring_context, free_leg_candidates, primal_dual_ring_cover


@dataclass(frozen=True)
class Leaf:
    core: CoreInfo
    legs: tuple[Unit, ...]
    leg_cost: Fraction


@dataclass(frozen=True)
class Star:
    center: Unit
    leaves: tuple[Leaf, ...]
    total_cost: Fraction  # head + summed leg prices (overlaps counted per leaf)
    density: Fraction  # total_cost / leaf count


@dataclass
class PhaseResult:
    level: int
    added: list[Unit]
    iterations: list[IterationRecord]


class PhaseStuckError(RuntimeError):
    """No (head, core) pair is priceable; the instance cannot be completed."""


def candidate_heads(inst: Instance, units) -> tuple[Unit, ...]:
    """Every positive-cost edge with a free unit, lowest copy first."""
    return free_leg_candidates(inst, units)


def price_star_edges(
    inst: Instance,
    units,
    cores,
    level: int,
    heads=None,
) -> dict[tuple[Unit, CoreInfo], RingCover]:
    """Exact leg price for every (candidate head, core) pair.

    Unpriceable pairs are simply absent.  A head that covers nothing of a
    core's ring still gets a price: the legs then have to do all the work.
    """
    if not cores:
        raise ValueError("pricing needs at least one core")
    if heads is None:
        heads = candidate_heads(inst, units)
    prices: dict[tuple[Unit, CoreInfo], RingCover] = {}
    for head in heads:
        for core in cores:
            ctx = build_ring_context(inst, units, cores, core, head, level)
            cover = primal_dual_ring_cover(ctx)
            if cover is not None:
                prices[(head, core)] = cover
    return prices


def _scan_head(
    head: Unit,
    head_cost: Fraction,
    priced: list[tuple[CoreInfo, RingCover]],
) -> tuple[tuple, Star] | None:
    """Best leaf prefix for one head, with its global comparison key."""
    if not priced:
        return None
    leaves = sorted(
        (Leaf(core, cover.legs, cover.cost) for core, cover in priced),
        key=lambda lf: (lf.leg_cost, lf.core.representative),
    )
    best = None
    running = Fraction(0)
    for j, leaf in enumerate(leaves, start=1):
        running += leaf.leg_cost
        density = (head_cost + running) / j
        key = (density, -j)
        if best is None or key < best[0]:
            best = (key, j)
    (density, neg_j), j = best
    chosen = tuple(leaves[:j])
    star = Star(head, chosen, head_cost + sum((lf.leg_cost for lf in chosen), Fraction(0)), density)
    full_key = (
        density,
        -j,
        head[0],
        head[1],
        tuple(lf.core.representative for lf in chosen),
    )
    return full_key, star


def best_star(inst: Instance, prices) -> Star:
    """Global minimum-density star from a full price map.

    Ties prefer more leaves, then the smaller head edge id, then smaller leaf
    representatives.
    """
    by_head: dict[Unit, list[tuple[CoreInfo, RingCover]]] = {}
    for (head, core), cover in prices.items():
        by_head.setdefault(head, []).append((core, cover))
    best = None
    for head in sorted(by_head):
        scanned = _scan_head(head, inst.unit_cost(head), by_head[head])
        if scanned and (best is None or scanned[0] < best[0]):
            best = scanned
    if best is None:
        raise PhaseStuckError("no priceable (head, core) pair at this level")
    return best[1]


def cheapest_star(inst: Instance, units, cores, level: int) -> Star:
    """Same selection as price-everything + best_star, pricing lazily.

    Heads are visited in ascending cost; any star with head h has density at
    least cost(h) / |cores|, so once that lower bound exceeds the best density
    seen the remaining heads cannot win (nor tie, the bound is strict).
    """
    m = len(cores)
    best = None
    for head in sorted(candidate_heads(inst, units), key=lambda u: (inst.unit_cost(u), u)):
        head_cost = inst.unit_cost(head)
        if best is not None and head_cost / m > best[0][0]:
            break
        priced = []
        for core in cores:
            ctx = build_ring_context(inst, units, cores, core, head, level)
            cover = primal_dual_ring_cover(ctx)
            if cover is not None:
                priced.append((core, cover))
        scanned = _scan_head(head, head_cost, priced)
        if scanned and (best is None or scanned[0] < best[0]):
            best = scanned
    if best is None:
        raise PhaseStuckError("no priceable (head, core) pair at this level")
    return best[1]


def star_units(star: Star) -> set[Unit]:
    units = {star.center}
    for leaf in star.leaves:
        units.update(leaf.legs)
    return units


def run_phase(inst: Instance, units, level: int) -> PhaseResult:
    """Cover the level-``level`` family: iterate star selection until no core
    remains at that level.

    The caller guarantees the current max residual level equals ``level``.
    Each iteration must retire at least half its leaf count in cores (checked,
    integrally) and strictly shrink the core count.
    """
    selected = set(units)
    added: list[Unit] = []
    records: list[IterationRecord] = []
    cores = rooted_cores(inst, selected)
    if not cores or cores[0].deficiency != level:
        raise ValueError(f"phase started at level {level} but state disagrees")

    while cores:
        star = cheapest_star(inst, selected, cores, level)
        new_units = sorted(star_units(star) - selected)
        selected.update(new_units)
        added.extend(new_units)

        new_level = rooted_max_level(inst, selected)
        cores_after = rooted_cores(inst, selected) if new_level == level else []
        drop = len(cores) - len(cores_after)
        if drop <= 0:
            raise AssertionError("greedy iteration failed to retire any core")
        if drop < math.ceil(len(star.leaves) / 2):
            raise AssertionError(
                f"core count dropped by {drop}, below half of {len(star.leaves)} leaves"
            )
        records.append(
            IterationRecord(
                phase_level=level,
                cores_before=len(cores),
                cores_after=len(cores_after),
                star_center=star.center[0],
                leaf_count=len(star.leaves),
                added_cost=inst.units_cost(new_units),
                added_units=tuple(new_units),
            )
        )
        cores = cores_after

    return PhaseResult(level, added, records)
