import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rkec.exact import (
    CertificateError,
    brute_force_opt,
    brute_force_ring_cover,
    enumerate_rooted,
    nested_chain_certificate,
    partition_into_covers,
)
from rkec.instance import Edge, InfeasibleError, Instance, SizeRefusalError

from conftest import oracle_opt_cost, small_random_instance


def test_fixture_optimum(instance_a):
    sol = brute_force_opt(instance_a)
    assert sol.total_cost == 4
    assert sol.selected == {1: 1, 2: 1, 3: 1}
    assert sol.feasible and sol.connectivity == {2: 1, 3: 1}


def test_fixture_optimum_matches_independent_oracle(instance_a):
    assert brute_force_opt(instance_a).total_cost == oracle_opt_cost(instance_a)


def test_zero_cost_graph_already_feasible():
    inst = Instance(2, 0, frozenset({1}), (Edge(1, 0, 1, Fraction(0)),), 1)
    sol = brute_force_opt(inst)
    assert sol.total_cost == 0 and sol.selected == {}


def test_single_expensive_edge():
    inst = Instance(2, 0, frozenset({1}), (Edge(1, 0, 1, Fraction(7)),), 1)
    assert brute_force_opt(inst).total_cost == 7


def test_size_refusal(instance_a):
    with pytest.raises(SizeRefusalError):
        brute_force_opt(instance_a, max_units=3)


def test_infeasible_instance_reports_witness():
    inst = Instance(3, 0, frozenset({1, 2}), (Edge(1, 0, 1, Fraction(1)),), 1)
    with pytest.raises(InfeasibleError) as exc:
        brute_force_opt(inst)
    assert exc.value.terminal == 2 and exc.value.achieved == 0


def test_preselected_units_are_free(instance_a):
    sol = brute_force_opt(instance_a, preselected={(1, 0), (2, 0)})
    # only terminal 3 is open; cheapest completion is the relay arc onto it
    assert sol.total_cost == 1
    assert sol.selected == {3: 1}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_pruned_search_equals_plain_enumeration(seed):
    inst = small_random_instance(random.Random(seed), max_nodes=5)
    if len(inst.positive_units) > 12:
        return
    try:
        fast = brute_force_opt(inst)
    except InfeasibleError:
        with pytest.raises(InfeasibleError):
            brute_force_opt(inst, use_pruning=False)
        return
    slow = brute_force_opt(inst, use_pruning=False)
    assert fast.total_cost == slow.total_cost
    assert fast.selected == slow.selected  # identical lexicographic tie-break


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_optimum_matches_independent_oracle(seed):
    inst = small_random_instance(random.Random(seed), max_nodes=5, max_k=1)
    if len(inst.positive_units) > 10:
        return
    oracle = oracle_opt_cost(inst)
    if oracle is None:
        with pytest.raises(InfeasibleError):
            brute_force_opt(inst)
    else:
        assert brute_force_opt(inst).total_cost == oracle


# ---------------------------------------------------------------------------
# family enumeration


def test_enumerated_family_fixture(instance_a):
    family = enumerate_rooted(instance_a, ())
    assert family.level == 1
    # every terminal-containing subset of {1, 2, 3} is deficient
    assert len(family.members) == 6
    assert sorted(map(sorted, family.cores)) == [[2], [3]]
    ring = family.ring_view(frozenset({2}))
    assert ring.is_ring
    assert sorted(ring.maximal) == [1, 2]
    assert family.check_t_intersecting()
    assert family.every_member_contains_core()


def test_enumerated_family_after_optimum(instance_a):
    family = enumerate_rooted(instance_a, [(1, 0), (2, 0), (3, 0)])
    assert family.level == 0 and family.members == [] and family.cores == []


def test_explicit_single_set_family():
    from rkec.deficiency import ExplicitSetFunction
    from rkec.exact import enumerate_explicit

    fn = ExplicitSetFunction(3, frozenset({1}), ((frozenset({1}), 1),))
    family = enumerate_explicit(fn)
    assert family.members == [frozenset({1})]
    ring = family.ring_view(frozenset({1}))
    assert ring.is_ring and ring.maximal == frozenset({1})


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.data())
def test_residual_family_stays_t_intersecting(seed, data):
    inst = small_random_instance(random.Random(seed))
    units = list(inst.positive_units)
    sample = data.draw(st.sets(st.sampled_from(units)) if units else st.just(set()))
    family = enumerate_rooted(inst, sample)
    assert family.check_t_intersecting()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.data())
def test_rings_and_maximal_sets(seed, data):
    inst = small_random_instance(random.Random(seed))
    units = list(inst.positive_units)
    sample = data.draw(st.sets(st.sampled_from(units)) if units else st.just(set()))
    family = enumerate_rooted(inst, sample)
    maximal = {}
    for core in family.cores:
        ring = family.ring_view(core)
        assert ring.is_ring
        maximal[core] = ring.maximal
    cores = list(maximal)
    for i, a in enumerate(cores):
        for b in cores[i + 1:]:
            assert not (maximal[a] & maximal[b] & inst.terminals)


# ---------------------------------------------------------------------------
# exact ring covers


def ring_members_fixture():
    # members over {1, 2}: {1} and {1, 2}
    return [frozenset({1}), frozenset({1, 2})]


def test_ring_cover_head_covers_everything():
    members = ring_members_fixture()
    cost, legs = brute_force_ring_cover(members, (0, 1), [])
    assert cost == 0 and legs == ()


def test_ring_cover_needs_two_edges():
    members = ring_members_fixture()
    candidates = [
        ("a", 2, 1, Fraction(1)),  # enters {1} only
        ("b", 0, 1, Fraction(3)),  # enters both
        ("c", 0, 2, Fraction(1)),  # enters {1,2} only
    ]
    cost, legs = brute_force_ring_cover(members, None, candidates)
    assert cost == 2 and legs == ("a", "c")


def test_ring_cover_unpriceable():
    members = [frozenset({1}), frozenset({1, 2})]
    candidates = [("c", 0, 2, Fraction(1))]  # nothing enters {1}
    assert brute_force_ring_cover(members, (1, 2), candidates) is None


def test_instance_a_ring_cover(instance_a):
    family = enumerate_rooted(instance_a, ())
    ring = family.ring_view(frozenset({2}))
    head = instance_a.edge_by_id[1]
    candidates = [
        (e.id, e.tail, e.head, e.cost) for e in instance_a.positive_edges if e.id != 1
    ]
    cost, legs = brute_force_ring_cover(ring.members, (head.tail, head.head), candidates)
    assert cost == 1 and legs == (2,)


# ---------------------------------------------------------------------------
# structure certificates


def test_chain_certificate_simple():
    members = ring_members_fixture()
    cover = {"a": (2, 1), "c": (0, 2)}
    cert = nested_chain_certificate(members, cover)
    assert list(cert.sets) == [frozenset({1}), frozenset({1, 2})]
    assert list(cert.edges) == ["a", "c"]


def test_chain_certificate_rejects_redundant_cover():
    members = ring_members_fixture()
    cover = {"a": (2, 1), "b": (0, 1), "c": (0, 2)}  # b has no private witness
    with pytest.raises(CertificateError):
        nested_chain_certificate(members, cover)


def test_partition_into_covers_basic():
    members = [frozenset({1})]
    edges = {"a": (0, 1), "b": (2, 1), "c": (3, 1)}
    groups = partition_into_covers(members, edges, 2)
    assert groups is not None
    covered = [
        any(head in m and tail not in m for key in group for tail, head in [edges[key]])
        for group in groups
        for m in members
    ]
    assert all(covered)


def test_partition_rejects_thin_cover():
    members = [frozenset({1})]
    edges = {"a": (0, 1)}
    with pytest.raises(ValueError):
        partition_into_covers(members, edges, 2)
