"""Independent verification: feasibility, ratio bounds, per-iteration audits.

Everything here recomputes from the instance and the recorded run, never from
solver internals.  The performance guarantee 2 * H(d) * (1 + ln |T|) mixes a
rational with a logarithm, so the bound is handled as an outward-rounded
rational interval: a comparison against the interval's far side is rigorous,
and a ratio that lands inside triggers re-evaluation at higher precision
(which must terminate: ln of an integer >= 2 is irrational, ratios are
rational, and for |T| = 1 the interval is a point).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .exact import brute_force_opt
from .flows import instance_view, max_flow_paths, max_flow_value
from .instance import Instance, SizeRefusalError, Solution, frac_to_str
from .solver import SolveReport


def check_feasible(inst: Instance, sol: Solution) -> tuple[dict[int, int], bool]:
    """Recompute per-terminal connectivity of the zero-cost graph plus the
    selected units; True iff every terminal reaches the target."""
    view = instance_view(inst, sol.units())
    conn = {t: max_flow_value(view, inst.root, t) for t in sorted(inst.terminals)}
    return conn, all(v >= inst.k for v in conn.values())


def path_packing_witness(inst: Instance, sol: Solution, terminal: int) -> list[list[int]]:
    """Extract edge-disjoint root-terminal paths and re-validate them edge by
    edge against the instance's capacities."""
    view = instance_view(inst, sol.units())
    paths = max_flow_paths(view, inst.root, terminal)
    capacity: dict[tuple[int, int], int] = {}
    for e in inst.zero_edges:
        capacity[(e.tail, e.head)] = capacity.get((e.tail, e.head), 0) + e.mult
    for eid, count in sol.selected.items():
        e = inst.edge_by_id[eid]
        capacity[(e.tail, e.head)] = capacity.get((e.tail, e.head), 0) + count
    used: dict[tuple[int, int], int] = {}
    for path in paths:
        for u, v in zip(path, path[1:]):
            used[(u, v)] = used.get((u, v), 0) + 1
    for arc, count in used.items():
        if count > capacity.get(arc, 0):
            raise AssertionError(f"witness paths overuse arc {arc}")
    return paths


def _mpf_to_fraction(x) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    mantissa = Fraction(-man if sign else man)
    return mantissa * Fraction(2) ** exp


def log_interval(n: int, dps: int = 50) -> tuple[Fraction, Fraction]:
    """Outward-rounded rational interval around ln(n)."""
    if n < 1:
        raise ValueError("logarithm of a non-positive count")
    if n == 1:
        return Fraction(0), Fraction(0)
    with mpmath.workdps(dps):
        center = _mpf_to_fraction(mpmath.ln(n))
    guard = Fraction(1, 10 ** (dps - 10))
    return center - guard, center + guard


def ratio_bound_interval(
    bound_harmonic: Fraction, terminal_count: int, dps: int = 50
) -> tuple[Fraction, Fraction]:
    """Interval for 2 * H * (1 + ln |T|)."""
    lo, hi = log_interval(terminal_count, dps)
    return 2 * bound_harmonic * (1 + lo), 2 * bound_harmonic * (1 + hi)


def bound_decision(
    cost: Fraction,
    opt_cost: Fraction,
    bound_harmonic: Fraction,
    terminal_count: int,
) -> tuple[bool, Fraction, Fraction]:
    """Decide cost <= bound * opt rigorously; returns (holds, lo, hi)."""
    if opt_cost == 0:
        return cost == 0, Fraction(0), Fraction(0)
    ratio = cost / opt_cost
    dps = 50
    while True:
        lo, hi = ratio_bound_interval(bound_harmonic, terminal_count, dps)
        if ratio <= lo:
            return True, lo, hi
        if ratio > hi:
            return False, lo, hi
        if dps >= 800:  # unreachable for rational ratios; defensive ceiling
            return ratio <= lo, lo, hi
        dps *= 2


@dataclass
class AuditReport:
    feasible: bool
    connectivity: dict[int, int]
    core_drop_violations: list[int] = field(default_factory=list)  # record indexes
    ratio: Fraction | None = None
    bound_lo: Fraction | None = None
    bound_hi: Fraction | None = None
    bound_holds: bool | None = None
    density_checked: bool = False
    density_violations: list[int] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return (
            self.feasible
            and not self.core_drop_violations
            and not self.density_violations
            and self.bound_holds is not False
        )


def audit_run(
    inst: Instance,
    report: SolveReport,
    opt: Solution | None = None,
    *,
    density_max_units: int | None = None,
) -> AuditReport:
    """Audit a recorded run.

    Always: feasibility and the per-iteration core-drop rule (the core count
    must fall by at least half the leaf count, rounded up).  With an exact
    optimum: the ratio bound.  With ``density_max_units`` set and the instance
    small enough: replay the run and check each iteration's density against
    (2/level) * (residual optimum) / (cores before), brute-forcing the
    residual optimum from the iteration's own state.
    """
    connectivity, feasible = check_feasible(inst, report.solution)
    out = AuditReport(feasible=feasible, connectivity=connectivity)

    for idx, rec in enumerate(report.solution.audit):
        drop = rec.cores_before - rec.cores_after
        if drop < math.ceil(rec.leaf_count / 2):
            out.core_drop_violations.append(idx)

    if opt is not None:
        if opt.total_cost == 0:
            out.ratio = None if report.solution.total_cost else Fraction(0)
        else:
            out.ratio = report.solution.total_cost / opt.total_cost
        holds, lo, hi = bound_decision(
            report.solution.total_cost,
            opt.total_cost,
            report.bound_harmonic,
            report.terminal_count,
        )
        out.bound_holds, out.bound_lo, out.bound_hi = holds, lo, hi

    if density_max_units is not None:
        try:
            out.density_violations = density_violations(
                inst, report, max_units=density_max_units
            )
            out.density_checked = True
        except SizeRefusalError:
            out.density_checked = False

    return out


def density_violations(inst: Instance, report: SolveReport, *, max_units: int = 16) -> list[int]:
    """Replay a run checking each iteration against the density rule.

    Each recorded iteration must satisfy
    added_cost / core_drop <= (2 / level) * residual_opt / cores_before,
    where residual_opt is the exact cost of completing the instance from the
    iteration's starting state.
    """
    if len(inst.positive_units) > max_units:
        raise SizeRefusalError("instance too large for the density replay")
    violations = []
    selected: list = []
    for idx, rec in enumerate(report.solution.audit):
        residual_opt = brute_force_opt(
            inst, max_units=max_units, preselected=frozenset(selected)
        ).total_cost
        drop = rec.cores_before - rec.cores_after
        lhs = rec.added_cost / drop
        rhs = Fraction(2, rec.phase_level) * residual_opt / rec.cores_before
        if lhs > rhs:
            violations.append(idx)
        selected.extend(rec.added_units)
    return violations


def audit_to_doc(report: AuditReport) -> dict:
    return {
        "feasible": report.feasible,
        "connectivity": {str(t): v for t, v in sorted(report.connectivity.items())},
        "core_drop_violations": report.core_drop_violations,
        "ratio": frac_to_str(report.ratio) if report.ratio is not None else None,
        "bound_lo": frac_to_str(report.bound_lo) if report.bound_lo is not None else None,
        "bound_hi": frac_to_str(report.bound_hi) if report.bound_hi is not None else None,
        "bound_holds": report.bound_holds,
        "density_checked": report.density_checked,
        "density_violations": report.density_violations,
        "clean": report.clean,
    }


def audit_to_json(report: AuditReport) -> str:
    return json.dumps(audit_to_doc(report), indent=2, sort_keys=True) + "\n"
