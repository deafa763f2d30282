"""(2,2,1)- and (2,2,0)-gain-sparsity counts with violation witnesses.

For a variant with general bound ``2|V(F)| - l`` and balanced bound
``2|V(F)| - 2`` a signed quotient graph is sparse when every edge set ``F``
satisfies the general bound and every balanced ``F`` the balanced bound.

:func:`check_gain_sparse` scans vertex subsets ``W`` and the edge set ``I(W)``
they induce.  The general bound only needs induced sets.  For the balanced
bound, a balanced ``F`` with ``V(F) = W`` and ``|F| > 2|W| - 2`` is a subset
of ``I(W)`` of size at least ``2|W| - 1``; since ``|I(W)| <= 2|W| - l`` (or the
general bound already fails), ``F`` is ``I(W)`` minus at most ``1 - l`` edges.
For (2,2,1) that means ``F = I(W)``; for (2,2,0) single-edge deletions from
``I(W)`` are also tried.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .quotient import GainEdge, SignedQuotientGraph, is_balanced

VARIANTS = {"221": 1, "220": 0}

MAX_ORBITS = 20
MAX_ORACLE_EDGES = 18


class SparsityError(ValueError):
    pass


@dataclass(frozen=True)
class Witness:
    orbits: tuple[str, ...]
    edge_ids: tuple[str, ...]
    n_edges: int
    bound: int
    balanced: bool
    reason: str

    def to_json(self) -> dict:
        return {
            "orbits": list(self.orbits),
            "edges": list(self.edge_ids),
            "count": self.n_edges,
            "bound": self.bound,
            "balanced": self.balanced,
            "reason": self.reason,
        }


@dataclass(frozen=True)
class SparsityVerdict:
    sparse: bool
    tight: bool
    witness: Witness | None = None

    def to_json(self) -> dict:
        d = {"sparse": self.sparse, "tight": self.tight}
        if self.witness is not None:
            d["witness"] = self.witness.to_json()
        return d


def _variant_l(variant) -> int:
    key = str(variant).replace(",", "").replace("(", "").replace(")", "").replace(" ", "")
    if key not in VARIANTS:
        raise SparsityError(f"unknown sparsity variant {variant!r}; use '221' or '220'")
    return VARIANTS[key]


def _tight_count(q: SignedQuotientGraph, l: int) -> bool:
    return len(q.edges) == 2 * len(q.orbits) - l


def check_gain_sparse(q: SignedQuotientGraph, variant="221", loopless_required: bool = False) -> SparsityVerdict:
    """Vertex-subset scan; witnesses are minimal by subset size, then lexicographic."""
    l = _variant_l(variant)
    n = len(q.orbits)
    if n > MAX_ORBITS:
        raise SparsityError(f"{n} orbits exceeds the exhaustive-scan limit of {MAX_ORBITS}")
    if loopless_required:
        loops = q.loops()
        if loops:
            e = loops[0]
            return SparsityVerdict(False, False, Witness((e.u,), (e.id,), 1, 0, False, "loop present"))
    for size in range(1, n + 1):
        for W in itertools.combinations(q.orbits, size):
            edges = q.induced_edges(W)
            m = len(edges)
            gen = 2 * size - l
            if m > gen:
                return SparsityVerdict(False, False, _witness(W, edges, gen, False, "general bound"))
            bal = 2 * size - 2
            if m <= bal:
                continue
            bad = _balanced_excess(edges, bal)
            if bad is not None:
                return SparsityVerdict(False, False, _witness(W, bad, bal, True, "balanced bound"))
    return SparsityVerdict(True, _tight_count(q, l))


def _balanced_excess(edges: list[GainEdge], bound: int) -> list[GainEdge] | None:
    """A balanced subset of ``edges`` with more than ``bound`` edges, if any."""
    for drop in range(0, len(edges) - bound):
        for removed in itertools.combinations(range(len(edges)), drop):
            keep = [e for i, e in enumerate(edges) if i not in removed]
            if is_balanced(keep):
                return keep
    return None


def _witness(W, edges, bound, balanced, reason) -> Witness:
    return Witness(tuple(W), tuple(e.id for e in edges), len(edges), bound, balanced, reason)


def is_gain_tight(q: SignedQuotientGraph, variant="221", loopless_required: bool = False) -> bool:
    return check_gain_sparse(q, variant, loopless_required).tight


def oracle_gain_sparse_edge_subsets(q: SignedQuotientGraph, variant="221", loopless_required: bool = False) -> SparsityVerdict:
    """Literal check of the definition over every edge subset.

    Balance is decided independently of the union-find path: a set is
    balanced iff some vertex signing satisfies all of its edges, and each
    edge is precomputed as the bitmask of signings it satisfies.
    """
    l = _variant_l(variant)
    m = len(q.edges)
    if m > MAX_ORACLE_EDGES:
        raise SparsityError(f"{m} edges exceeds the oracle limit of {MAX_ORACLE_EDGES}")
    if loopless_required:
        loops = q.loops()
        if loops:
            e = loops[0]
            return SparsityVerdict(False, False, Witness((e.u,), (e.id,), 1, 0, False, "loop present"))
    n = len(q.orbits)
    idx = {o: i for i, o in enumerate(q.orbits)}
    all_sign = (1 << (1 << n)) - 1
    sat = []
    vbits = []
    for e in q.edges:
        i, j = idx[e.u], idx[e.v]
        mask = 0
        if not e.is_loop:
            for s in range(1 << n):
                si = -1 if (s >> i) & 1 else 1
                sj = -1 if (s >> j) & 1 else 1
                if si * sj == e.gain:
                    mask |= 1 << s
        sat.append(mask)
        vbits.append((1 << i) | (1 << j))

    found: list = []

    def rec(k: int, chosen: list[int], vmask: int, smask: int) -> bool:
        if k == m:
            if not chosen:
                return False
            nv = bin(vmask).count("1")
            if len(chosen) > 2 * nv - l:
                found.append((chosen[:], 2 * nv - l, False, "general bound"))
                return True
            if smask and len(chosen) > 2 * nv - 2:
                found.append((chosen[:], 2 * nv - 2, True, "balanced bound"))
                return True
            return False
        if rec(k + 1, chosen, vmask, smask):
            return True
        chosen.append(k)
        hit = rec(k + 1, chosen, vmask | vbits[k], smask & sat[k])
        chosen.pop()
        return hit

    if rec(0, [], 0, all_sign):
        chosen, bound, bal, reason = found[0]
        es = [q.edges[i] for i in chosen]
        orbits = tuple(o for o in q.orbits if any(o in (e.u, e.v) for e in es))
        return SparsityVerdict(False, False, Witness(orbits, tuple(e.id for e in es), len(es), bound, bal, reason))
    return SparsityVerdict(True, _tight_count(q, l))


def enumerate_tight_graphs(n_orbits: int, variant="221", loopless: bool = False) -> list[SignedQuotientGraph]:
    """All tight signed quotient graphs on ``n_orbits`` orbits, one per switching-isomorphism class."""
    from .quotient import canonical_form

    l = _variant_l(variant)
    orbits = [chr(ord("a") + i) for i in range(n_orbits)]
    slots = [] if loopless else [(o, o, -1) for o in orbits]
    for i, j in itertools.combinations(range(n_orbits), 2):
        slots += [(orbits[i], orbits[j], 1), (orbits[i], orbits[j], -1)]
    target = 2 * n_orbits - l
    seen = {}
    for chosen in itertools.combinations(slots, target):
        q = SignedQuotientGraph.from_triples(orbits, chosen)
        if not check_gain_sparse(q, variant).tight:
            continue
        key = canonical_form(q)
        seen.setdefault(key, q)
    return list(seen.values())
