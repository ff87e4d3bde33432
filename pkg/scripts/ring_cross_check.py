#!/usr/bin/env python3
"""Stress the primal-dual ring cover against exhaustive enumeration.

Usage: python scripts/ring_cross_check.py [--seeds N] [--per-state HEADS]

Random small instances are driven into random partial-selection states; every
(core, head) ring context gets priced twice, by the primal-dual and by the
exact hitting-set search, and the costs must agree as exact rationals.
"""

import argparse
import random
import time
from fractions import Fraction

from rkec.deficiency import rooted_cores, rooted_max_level
from rkec.exact import brute_force_ring_cover, enumerate_arc_family
from rkec.generate import GenParams, generate_instance
from rkec.greedy import candidate_heads
from rkec.rings import build_ring_context, primal_dual_ring_cover


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=200)
    parser.add_argument("--per-state", type=int, default=3)
    args = parser.parse_args()

    t0 = time.time()
    contexts = mismatches = unpriceable = 0
    for seed in range(1, args.seeds + 1):
        rng = random.Random(seed)
        inst = generate_instance(GenParams(
            nodes=rng.randint(4, 8),
            terminals=rng.randint(1, 3),
            k=rng.randint(1, 2),
            density=Fraction(2, 5),
            seed=seed,
            max_units=18,
        ))
        universe = [v for v in range(inst.node_count) if v != inst.root]
        units = list(inst.positive_units)
        state = frozenset(u for u in units if rng.random() < 0.3)
        if rooted_max_level(inst, state) == 0:
            continue
        cores = rooted_cores(inst, state)
        level = cores[0].deficiency
        heads = candidate_heads(inst, state)
        for head in heads[: args.per_state]:
            for core in cores:
                ctx = build_ring_context(inst, state, cores, core, head, level)
                bare = []
                for arc in ctx.base_arcs[:-1]:
                    bare.extend([(arc.tail, arc.head)] * arc.cap)
                ring = enumerate_arc_family(
                    universe, inst.terminals, inst.k, bare
                ).ring_view(core.members)
                exact = brute_force_ring_cover(
                    ring.members,
                    inst.unit_arc(head),
                    [(u, *inst.unit_arc(u), inst.unit_cost(u)) for u in ctx.candidates],
                )
                cover = primal_dual_ring_cover(ctx)
                contexts += 1
                if exact is None:
                    unpriceable += 1
                    mismatches += cover is not None
                elif cover is None or cover.cost != exact[0] or not cover.certificate_ok:
                    mismatches += 1
                    print(f"MISMATCH seed={seed} core={sorted(core.members)} head={head}")

    print(
        f"{contexts} contexts in {time.time() - t0:.1f}s: "
        f"{mismatches} mismatches, {unpriceable} unpriceable"
    )
    return 1 if mismatches else 0


if __name__ == "__main__":
    raise SystemExit(main())
