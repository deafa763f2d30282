import itertools

import pytest
from hypothesis import given

from conftest import quotient_from_seed, seeds
from gridrig.quotient import SignedQuotientGraph, is_balanced
from gridrig.sparsity import (
    SparsityError,
    check_gain_sparse,
    enumerate_tight_graphs,
    oracle_gain_sparse_edge_subsets,
)

K4 = [(u, v, 1) for u, v in itertools.combinations("abcd", 2)]


def test_single_loop_is_tight():
    q = SignedQuotientGraph.from_triples("a", [("a", "a", -1)])
    assert check_gain_sparse(q).to_json() == {"sparse": True, "tight": True}


def test_trivial_k4_sparse_not_tight():
    v = check_gain_sparse(SignedQuotientGraph.from_triples("abcd", K4))
    assert v.sparse and not v.tight


def test_k4_plus_parallel_edge_tight():
    q = SignedQuotientGraph.from_triples("abcd", K4 + [("a", "b", -1)])
    assert check_gain_sparse(q).tight
    assert oracle_gain_sparse_edge_subsets(q).tight


def test_two_k3_minus_edge_tight_and_loopless(two_k3):
    assert check_gain_sparse(two_k3, "221", loopless_required=True).tight


def test_loopless_requirement_gives_loop_witness():
    q = SignedQuotientGraph.from_triples("a", [("a", "a", -1)])
    v = check_gain_sparse(q, loopless_required=True)
    assert not v.sparse and v.witness.reason == "loop present"


def test_two_loops_violate_balanced_free_count():
    q = SignedQuotientGraph.from_triples("ab", [("a", "a", -1), ("b", "b", -1), ("a", "b", 1), ("a", "b", -1)])
    v = check_gain_sparse(q)
    assert not v.sparse
    assert v.witness.reason == "general bound" and v.witness.orbits == ("a", "b")


def test_220_needs_deletions_from_induced_set():
    # balanced K5 minus one edge has 9 > 2*5-2 edges; one gain -1 parallel edge
    # makes the induced set unbalanced, so only a deletion exposes the violation
    pairs = [p for p in itertools.combinations("abcde", 2) if p != ("d", "e")]
    q = SignedQuotientGraph.from_triples("abcde", [(u, v, 1) for u, v in pairs] + [("a", "b", -1)])
    assert len(q.edges) == 10 and not is_balanced(q.edges)
    fast = check_gain_sparse(q, "220")
    assert not fast.sparse and fast.witness.balanced and fast.witness.n_edges == 9
    assert not oracle_gain_sparse_edge_subsets(q, "220").sparse


def test_unknown_variant():
    with pytest.raises(SparsityError):
        check_gain_sparse(SignedQuotientGraph.from_triples("a", []), "231")


@given(seeds)
def test_scan_matches_edge_subset_oracle(seed):
    q = quotient_from_seed(seed, max_orbits=5, max_edges=12)
    for variant in ("221", "220"):
        for loopless in (False, True):
            a = check_gain_sparse(q, variant, loopless)
            b = oracle_gain_sparse_edge_subsets(q, variant, loopless)
            assert (a.sparse, a.tight) == (b.sparse, b.tight)


@given(seeds)
def test_witness_really_violates(seed):
    q = quotient_from_seed(seed, max_orbits=5, max_edges=12)
    v = check_gain_sparse(q, "221")
    if v.sparse:
        return
    w = v.witness
    edges = [q.edge(i) for i in w.edge_ids]
    assert w.n_edges == len(edges) > w.bound
    if w.balanced:
        assert is_balanced(edges)


def test_enumeration_counts_small():
    # one orbit: the loop; two orbits: loops at both ends or a parallel pair plus a loop
    assert len(enumerate_tight_graphs(1)) == 1
    assert len(enumerate_tight_graphs(2)) == 2
    loopless3 = enumerate_tight_graphs(3, loopless=True)
    assert len(loopless3) == 1
