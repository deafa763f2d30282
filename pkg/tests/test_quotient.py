import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import quotient_from_seed, seeds
from gridrig.quotient import (
    CoveringGraph,
    GainEdge,
    ParityUnionFind,
    QuotientError,
    SignedQuotientGraph,
    balance,
    build_covering,
    build_quotient,
    canonical_form,
    classify_subgraph,
    cycle_gains_balanced,
    find_switching_isomorphism,
    switch,
    switch_many,
    switching_equivalent,
    switching_isomorphic,
)


def test_covering_counts(fixed_bar_graph):
    g = build_covering(fixed_bar_graph)
    assert len(g.vertices) == 6
    # four non-loop orbits give two bars each, the loop one fixed bar
    assert len(g.edges) == 9
    assert len(g.fixed_edges()) == 1


def test_loop_needs_negative_gain():
    with pytest.raises(QuotientError):
        SignedQuotientGraph.from_triples("a", [("a", "a", 1)])


def test_parallel_edges_need_distinct_gains():
    with pytest.raises(QuotientError):
        SignedQuotientGraph.from_triples("ab", [("a", "b", 1), ("b", "a", 1)])


def test_unknown_orbit_rejected():
    with pytest.raises(QuotientError):
        SignedQuotientGraph.from_triples("a", [("a", "z", 1)])


def test_covering_rejects_fixed_vertex():
    with pytest.raises(QuotientError):
        CoveringGraph((1, 2), (), {1: 1, 2: 2})


@given(seeds)
def test_json_round_trip(seed):
    q = quotient_from_seed(seed)
    assert SignedQuotientGraph.from_json(q.to_json()) == q


@given(seeds)
def test_covering_quotient_round_trip(seed):
    q = quotient_from_seed(seed)
    g = build_covering(q)
    back = build_quotient(g, [(o, 1) for o in q.orbits], {(o, 1): o for o in q.orbits})
    assert back.edge_multiset() == q.edge_multiset()


@given(seeds, st.data())
def test_switching_is_involutive_and_keeps_covering(seed, data):
    q = quotient_from_seed(seed)
    o = data.draw(st.sampled_from(q.orbits))
    assert switch(switch(q, o), o) == q
    # switching swaps which lift is the representative; the covering is the same graph
    swapped = {(x, s): (x, -s if x == o else s) for x in q.orbits for s in (1, -1)}
    cov = build_covering(q).edge_set()
    cov_s = {frozenset(swapped[v] for v in e) for e in build_covering(switch(q, o)).edge_set()}
    assert cov == cov_s


@given(seeds, st.data())
def test_balance_matches_cycle_oracle(seed, data):
    q = quotient_from_seed(seed)
    subset = data.draw(st.sets(st.sampled_from(q.edge_ids))) if q.edges else set()
    res = balance(q, subset)
    assert res.balanced == cycle_gains_balanced(q, subset)
    if res.balanced:
        for e in q.subgraph(subset):
            assert res.signing[e.u] * res.signing[e.v] == e.gain


@given(seeds, st.data())
def test_balance_is_switching_invariant(seed, data):
    q = quotient_from_seed(seed)
    flips = data.draw(st.sets(st.sampled_from(q.orbits)))
    p = switch_many(q, flips)
    for k in range(len(q.edges) + 1):
        for sub in itertools.islice(itertools.combinations(q.edge_ids, k), 20):
            assert balance(q, sub).balanced == balance(p, sub).balanced


def test_parity_union_find():
    uf = ParityUnionFind("abc")
    assert uf.union("a", "b", -1)
    assert uf.union("b", "c", -1)
    assert uf.sign("a") * uf.sign("c") == 1
    assert not uf.union("a", "c", -1)


def test_classify_loop_is_unbalanced_map_graph():
    q = SignedQuotientGraph.from_triples("a", [("a", "a", -1)])
    c = classify_subgraph(q, ["e1"])
    assert c.spanning and c.connected and c.is_unbalanced_map_graph and not c.is_tree
    # the empty set spans a single orbit and is a tree there
    assert classify_subgraph(q, []).is_tree


def test_classify_tree_and_cycle(two_k3):
    tree = classify_subgraph(two_k3, ["e1", "e3"])
    assert tree.is_tree and tree.spanning
    cyc = classify_subgraph(two_k3, ["e1", "e2", "e3"])
    assert cyc.is_unbalanced_map_graph and cyc.contains_connected_spanning_unbalanced_map_graph
    assert cyc.certificate is not None and len(cyc.certificate) == 3
    bal = classify_subgraph(two_k3, ["e1", "e3", "e5"])
    assert not bal.is_unbalanced_map_graph and not bal.contains_connected_spanning_unbalanced_map_graph


@given(seeds, st.data())
def test_switching_isomorphism_of_relabelled_switched_copy(seed, data):
    q = quotient_from_seed(seed, max_orbits=4)
    perm = data.draw(st.permutations(q.orbits))
    mapping = dict(zip(q.orbits, perm))
    flips = data.draw(st.sets(st.sampled_from(q.orbits)))
    p = switch_many(q.relabel(mapping), [mapping[o] for o in flips])
    assert switching_isomorphic(q, p) and switching_isomorphic(p, q)
    assert canonical_form(q) == canonical_form(p)
    mp, sg = find_switching_isomorphism(q, p)
    assert switching_equivalent(q.relabel(mp), p)


def test_non_isomorphic_graphs_differ(two_k3):
    other = SignedQuotientGraph.from_triples("abc", [("a", "b", 1), ("a", "b", -1), ("c", "b", 1), ("c", "c", -1), ("c", "a", 1)])
    assert not switching_isomorphic(two_k3, other)
    assert canonical_form(two_k3) != canonical_form(other)
