"""Inductive construction moves on signed quotient graphs.

Forward moves (Henneberg 1 and 2, vertex-to-K4, edge-to-K3 / vertex
splitting, 2K3-[e] edge joining) carry every edge id they create, so a
replayed sequence rebuilds its target edge for edge.  A ``Switch`` step
changes orbit representatives; it never changes the covering graph.

Inverse moves are found by generate-and-verify: candidate contractions are
enumerated syntactically and kept only when the predecessor is
(2,2,1)-gain-tight and the forward move rebuilds the input exactly.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Union

from .quotient import (
    GainEdge,
    QuotientError,
    SignedQuotientGraph,
    balance,
    find_switching_isomorphism,
    switch_many,
    switching_isomorphic,
)
from .sparsity import check_gain_sparse

SYM = "sym"
ANTI = "anti"
MODES = (SYM, ANTI)


class MoveError(ValueError):
    """A move's side condition fails; ``clause`` names it."""

    def __init__(self, clause: str, index: int | None = None):
        self.clause = clause
        self.index = index
        where = f"step {index}: " if index is not None else ""
        super().__init__(where + clause)


# -- move types ---------------------------------------------------------------


@dataclass(frozen=True)
class H1:
    """Add orbit ``new`` with two edges ``(edge_id, target, gain)``.

    ``target == new`` makes that edge a loop (gain -1).
    """

    new: str
    edges: tuple[tuple[str, str, int], tuple[str, str, int]]

    @property
    def kind(self) -> str:
        (_, t1, _), (_, t2, _) = self.edges
        if self.new in (t1, t2):
            return "H1c"
        return "H1b" if t1 == t2 else "H1a"


@dataclass(frozen=True)
class H2:
    """Subdivide ``removed`` through ``new`` and add a third edge.

    ``first`` and ``second`` are ``(edge_id, end, gain)`` for the two halves
    (one per end of the removed edge); ``third`` joins ``new`` to an
    existing orbit.
    """

    new: str
    removed: str
    first: tuple[str, str, int]
    second: tuple[str, str, int]
    third: tuple[str, str, int]

    @property
    def kind(self) -> str:
        x, y, z = self.first[1], self.second[1], self.third[1]
        if x == y:
            return "H2c"
        return "H2b" if z in (x, y) else "H2a"


@dataclass(frozen=True)
class VertexToK4:
    """Replace ``orbit`` by a trivially-gained K4 on ``(orbit,) + new``.

    ``k4_edges`` lists six edge ids for the pairs (0,1), (0,2), (0,3), (1,2),
    (1,3), (2,3).  ``redistribution`` maps each non-loop edge at ``orbit`` to
    its new K4 end; ``loop`` is ``(loop_id, y, z)`` for the -1 replacement
    edge, or None.
    """

    orbit: str
    new: tuple[str, str, str]
    k4_edges: tuple[str, ...]
    redistribution: tuple[tuple[str, str], ...]
    loop: tuple[str, str, str] | None = None

    kind = "VertexToK4"


@dataclass(frozen=True)
class EdgeToK3:
    """Split ``orbit`` into ``orbit`` and ``new`` along the trivial edge to ``neighbour``.

    ``triangle`` holds the ids of the new edges (orbit-new, orbit-neighbour,
    new-neighbour); ``to_new`` lists the incident edges moved to ``new``.
    """

    orbit: str
    new: str
    neighbour: str
    trivial_edge: str
    triangle: tuple[str, str, str]
    to_new: tuple[str, ...] = ()

    kind = "EdgeToK3"


@dataclass(frozen=True)
class EdgeJoin:
    """Join a disjoint tight ``block`` to the graph by one edge.

    ``attach`` is ``(edge_id, existing_orbit, block_orbit, gain)``.  With a
    2K3-[e] block this is the K3 join; other tight blocks give the
    generalised join, which extraction uses only when no 2K3-[e] block
    hangs off a bridge.
    """

    block: SignedQuotientGraph
    attach: tuple[str, str, str, int]

    @property
    def kind(self) -> str:
        return "K3Join" if is_two_k3_minus_edge(self.block) else "EdgeJoin"


@dataclass(frozen=True)
class Switch:
    orbits: tuple[str, ...]

    kind = "Switch"


Move = Union[H1, H2, VertexToK4, EdgeToK3, EdgeJoin, Switch]

K4_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


# -- base graphs --------------------------------------------------------------


def unbalanced_loop(orbit: str = "a", edge_id: str = "e1") -> SignedQuotientGraph:
    return SignedQuotientGraph((orbit,), (GainEdge(edge_id, orbit, orbit, -1),))


def two_k3_minus_edge(names=("a", "b", "c"), ids=("e1", "e2", "e3", "e4", "e5")) -> SignedQuotientGraph:
    """``a-b`` and ``b-c`` doubled with both gains, ``c-a`` single with gain +1."""
    a, b, c = names
    return SignedQuotientGraph(
        (a, b, c),
        (
            GainEdge(ids[0], a, b, 1),
            GainEdge(ids[1], a, b, -1),
            GainEdge(ids[2], c, b, 1),
            GainEdge(ids[3], c, b, -1),
            GainEdge(ids[4], c, a, 1),
        ),
    )


def k4_plus_edge(names=("a", "b", "c", "d"), ids=("e1", "e2", "e3", "e4", "e5", "e6", "e7")) -> SignedQuotientGraph:
    """Trivially-gained K4 plus a gain -1 edge parallel to ``a-b``.

    Tight and loopless, anti-symmetrically realisable, yet no anti-mode move
    reaches it from 2K3-[e]; it serves as a second anti-mode base.
    """
    pairs = [(names[i], names[j]) for i, j in K4_PAIRS]
    edges = [GainEdge(eid, u, v, 1) for eid, (u, v) in zip(ids, pairs)]
    edges.append(GainEdge(ids[6], names[0], names[1], -1))
    return SignedQuotientGraph(tuple(names), tuple(edges))


_LOOP = unbalanced_loop()
_K3 = two_k3_minus_edge()
_K4E = k4_plus_edge()


def is_unbalanced_loop(q: SignedQuotientGraph) -> bool:
    return len(q.orbits) == 1 and len(q.edges) == 1 and q.edges[0].is_loop


def is_two_k3_minus_edge(q: SignedQuotientGraph) -> bool:
    return len(q.orbits) == 3 and len(q.edges) == 5 and switching_isomorphic(q, _K3)


def is_k4_plus_edge(q: SignedQuotientGraph) -> bool:
    return len(q.orbits) == 4 and len(q.edges) == 7 and not q.has_loops() and switching_isomorphic(q, _K4E)


BASES = {
    "UnbalancedLoop": is_unbalanced_loop,
    "TwoK3MinusEdge": is_two_k3_minus_edge,
    "K4PlusEdge": is_k4_plus_edge,
}
SYM_BASES = ("UnbalancedLoop",)
ANTI_BASES = ("TwoK3MinusEdge", "K4PlusEdge")


def is_base(q: SignedQuotientGraph, mode: str) -> bool:
    return any(BASES[name](q) for name in (SYM_BASES if mode == SYM else ANTI_BASES))


# -- forward application ------------------------------------------------------


def _build(orbits, edges, clause: str) -> SignedQuotientGraph:
    try:
        return SignedQuotientGraph(tuple(orbits), tuple(edges))
    except QuotientError as exc:
        raise MoveError(f"{clause}: {exc}") from None


def _check_mode(m: Move, mode: str | None) -> None:
    if mode != ANTI:
        return
    if isinstance(m, H1) and m.kind == "H1c":
        raise MoveError("H1c adds a loop; not allowed in anti mode")
    if isinstance(m, H2) and m.first[1] == m.second[1]:
        raise MoveError("H2c subdivides a loop; not allowed in anti mode")
    if isinstance(m, VertexToK4) and m.loop is not None:
        raise MoveError("vertex-to-K4 with a loop replacement is not allowed in anti mode")


def _check_mode_sym(m: Move, mode: str | None) -> None:
    if mode == SYM and isinstance(m, EdgeJoin):
        raise MoveError("edge joining is not a symmetric-mode move")


def _fresh_orbit(q: SignedQuotientGraph, name: str) -> None:
    if name in q.orbits:
        raise MoveError(f"orbit {name!r} already exists")


def _fresh_ids(q: SignedQuotientGraph, ids: Iterable[str], allow: Iterable[str] = ()) -> None:
    taken = set(q.edge_ids) - set(allow)
    ids = list(ids)
    if len(set(ids)) != len(ids):
        raise MoveError("move reuses an edge id")
    for i in ids:
        if i in taken:
            raise MoveError(f"edge id {i!r} already exists")


def apply_move(q: SignedQuotientGraph, m: Move, mode: str | None = None) -> SignedQuotientGraph:
    """Apply one forward move, checking its side conditions."""
    _check_mode(m, mode)
    _check_mode_sym(m, mode)
    if isinstance(m, Switch):
        try:
            return switch_many(q, m.orbits)
        except QuotientError as exc:
            raise MoveError(str(exc)) from None
    if isinstance(m, H1):
        return _apply_h1(q, m)
    if isinstance(m, H2):
        return _apply_h2(q, m)
    if isinstance(m, VertexToK4):
        return _apply_k4(q, m)
    if isinstance(m, EdgeToK3):
        return _apply_k3(q, m)
    if isinstance(m, EdgeJoin):
        return _apply_join(q, m, mode)
    raise MoveError(f"unknown move {m!r}")


def _apply_h1(q, m: H1):
    _fresh_orbit(q, m.new)
    _fresh_ids(q, [e[0] for e in m.edges])
    new_edges = []
    for eid, t, g in m.edges:
        if t != m.new and t not in q.orbits:
            raise MoveError(f"H1 target {t!r} is not an orbit")
        new_edges.append(GainEdge(eid, m.new, t, g))
    if all(t == m.new for _, t, _ in m.edges):
        raise MoveError("H1 edges cannot both be loops")
    return _build(q.orbits + (m.new,), q.edges + tuple(new_edges), "H1 parallel edges must have distinct gains")


def _apply_h2(q, m: H2):
    _fresh_orbit(q, m.new)
    try:
        e = q.edge(m.removed)
    except KeyError:
        raise MoveError(f"H2 removed edge {m.removed!r} does not exist") from None
    (i1, x, g1), (i2, y, g2), (i3, z, g3) = m.first, m.second, m.third
    if sorted((x, y)) != sorted((e.u, e.v)):
        raise MoveError("H2 halves must meet the two ends of the removed edge")
    if g1 * g2 != e.gain:
        raise MoveError("H2 gains of the halves must multiply to the removed gain")
    if z not in q.orbits:
        raise MoveError(f"H2 third edge must join an existing orbit, not {z!r}")
    _fresh_ids(q, [i1, i2, i3], allow=[m.removed])
    edges = [f for f in q.edges if f.id != m.removed]
    edges += [GainEdge(i1, m.new, x, g1), GainEdge(i2, m.new, y, g2), GainEdge(i3, m.new, z, g3)]
    return _build(q.orbits + (m.new,), edges, "H2 2-cycles must be unbalanced")


def _apply_k4(q, m: VertexToK4):
    v = m.orbit
    if v not in q.orbits:
        raise MoveError(f"vertex-to-K4 orbit {v!r} does not exist")
    for n in m.new:
        _fresh_orbit(q, n)
    k4 = (v,) + tuple(m.new)
    if len(set(k4)) != 4:
        raise MoveError("vertex-to-K4 needs four distinct orbits")
    if len(m.k4_edges) != 6:
        raise MoveError("vertex-to-K4 needs six K4 edge ids")
    incident = q.incident(v)
    loops = [e for e in incident if e.is_loop]
    non_loops = {e.id: e for e in incident if not e.is_loop}
    redis = dict(m.redistribution)
    if set(redis) != set(non_loops) or len(redis) != len(m.redistribution):
        raise MoveError("vertex-to-K4 must redistribute every non-loop edge at the orbit exactly once")
    if any(y not in k4 for y in redis.values()):
        raise MoveError("vertex-to-K4 redistributes onto a vertex outside the K4")
    if bool(loops) != (m.loop is not None):
        raise MoveError("vertex-to-K4 loop replacement must be given exactly when the orbit has a loop")
    _fresh_ids(q, m.k4_edges)
    edges = [e for e in q.edges if v not in (e.u, e.v)]
    for eid, (i, j) in zip(m.k4_edges, K4_PAIRS):
        edges.append(GainEdge(eid, k4[i], k4[j], 1))
    for eid, y in m.redistribution:
        e = non_loops[eid]
        edges.append(GainEdge(eid, e.other(v), y, e.gain))
    if m.loop is not None:
        lid, y, z = m.loop
        if lid != loops[0].id:
            raise MoveError("vertex-to-K4 loop replacement must reuse the loop id")
        if y not in k4 or z not in k4:
            raise MoveError("vertex-to-K4 loop replacement must stay inside the K4")
        edges.append(GainEdge(lid, y, z, -1))
    return _build(q.orbits + tuple(m.new), edges, "vertex-to-K4 produced parallel edges with equal gains")


def _apply_k3(q, m: EdgeToK3):
    v, u = m.orbit, m.neighbour
    if v not in q.orbits or u not in q.orbits or u == v:
        raise MoveError("edge-to-K3 needs two distinct existing orbits")
    _fresh_orbit(q, m.new)
    try:
        t = q.edge(m.trivial_edge)
    except KeyError:
        raise MoveError(f"edge-to-K3 edge {m.trivial_edge!r} does not exist") from None
    if {t.u, t.v} != {u, v} or t.gain != 1:
        raise MoveError("edge-to-K3 needs an edge of trivial gain between the orbit and its neighbour")
    incident = {e.id: e for e in q.incident(v)}
    moved = set(m.to_new)
    if not moved <= set(incident) or m.trivial_edge in moved:
        raise MoveError("edge-to-K3 may only move the other edges at the split orbit")
    _fresh_ids(q, m.triangle, allow=[m.trivial_edge])
    a, b, c = m.triangle
    edges = []
    for e in q.edges:
        if e.id == m.trivial_edge:
            continue
        if e.id in moved:
            if e.is_loop:
                e = GainEdge(e.id, m.new, m.new, -1)
            else:
                e = GainEdge(e.id, m.new, e.other(v), e.gain)
        edges.append(e)
    edges += [GainEdge(a, v, m.new, 1), GainEdge(b, v, u, 1), GainEdge(c, m.new, u, 1)]
    return _build(q.orbits + (m.new,), edges, "edge-to-K3 produced parallel edges with equal gains")


def _apply_join(q, m: EdgeJoin, mode=None):
    eid, x, y, g = m.attach
    if set(m.block.orbits) & set(q.orbits):
        raise MoveError("joined block must use new orbit names")
    if set(m.block.edge_ids) & set(q.edge_ids):
        raise MoveError("joined block must use new edge ids")
    if x not in q.orbits or y not in m.block.orbits:
        raise MoveError("join edge must go from the graph to the block")
    if not check_gain_sparse(m.block, "221", loopless_required=(mode == ANTI)).tight:
        raise MoveError("joined block must be (2,2,1)-gain-tight" + (" and loopless" if mode == ANTI else ""))
    _fresh_ids(q, [eid] + list(m.block.edge_ids))
    edges = q.edges + m.block.edges + (GainEdge(eid, x, y, g),)
    return _build(q.orbits + m.block.orbits, edges, "edge join")


# -- sequences ----------------------------------------------------------------


@dataclass(frozen=True)
class ConstructionSequence:
    base: SignedQuotientGraph
    moves: tuple[Move, ...] = ()

    @property
    def base_kind(self) -> str:
        for name, test in BASES.items():
            if test(self.base):
                return name
        raise MoveError("sequence base is not an unbalanced loop, 2K3-[e] or K4 plus an edge")

    def __len__(self) -> int:
        return len(self.moves)


def replay(seq: ConstructionSequence, mode: str | None = None, check_tight: bool = True) -> SignedQuotientGraph:
    """Rebuild the graph, checking every prefix is (2,2,1)-gain-tight."""
    kind = seq.base_kind
    if mode == ANTI and kind not in ANTI_BASES:
        raise MoveError("anti mode sequences start from 2K3-[e] or K4 plus an edge")
    if mode == SYM and kind not in SYM_BASES:
        raise MoveError("sym mode sequences start from an unbalanced loop")
    q = seq.base
    for i, m in enumerate(seq.moves):
        try:
            q = apply_move(q, m, mode)
        except MoveError as exc:
            raise MoveError(exc.clause, i) from None
        if check_tight and not isinstance(m, Switch):
            if not check_gain_sparse(q, "221", loopless_required=(mode == ANTI)).tight:
                raise MoveError("result is not (2,2,1)-gain-tight", i)
    return q


def same_graph(a: SignedQuotientGraph, b: SignedQuotientGraph) -> bool:
    """Equal orbit sets and equal edges id for id."""
    if set(a.orbits) != set(b.orbits):
        return False
    norm = lambda q: sorted((e.id, *sorted((e.u, e.v)), e.gain) for e in q.edges)
    return norm(a) == norm(b)


# -- inverse moves ------------------------------------------------------------


@dataclass(frozen=True)
class InverseCandidate:
    move: Move
    predecessor: SignedQuotientGraph
    # switch applied after ``move`` to land exactly on the input
    switch: tuple[str, ...] = ()

    def steps(self) -> tuple[Move, ...]:
        return (self.move,) + ((Switch(self.switch),) if self.switch else ())


class _Ids:
    def __init__(self, taken: Iterable[str], prefix: str = "r"):
        self.taken = set(taken)
        self.prefix = prefix
        self.k = 0

    def __call__(self) -> str:
        while True:
            self.k += 1
            name = f"{self.prefix}{self.k}"
            if name not in self.taken:
                self.taken.add(name)
                return name


def _try(orbits, edges) -> SignedQuotientGraph | None:
    try:
        return SignedQuotientGraph(tuple(orbits), tuple(edges))
    except QuotientError:
        return None


def _inverse_h1(q, mode, fresh):
    out = []
    for v in q.orbits:
        inc = q.incident(v)
        if len(inc) != 2 or len(q.orbits) == 1:
            continue
        if mode == ANTI and any(e.is_loop for e in inc):
            continue
        pred = _try([o for o in q.orbits if o != v], [e for e in q.edges if v not in (e.u, e.v)])
        if pred is None:
            continue
        move = H1(v, tuple((e.id, e.other(v), e.gain) for e in inc))
        out.append(InverseCandidate(move, pred))
    return out


def _inverse_h2(q, mode, fresh):
    out = []
    for v in q.orbits:
        inc = q.incident(v)
        if len(inc) != 3 or any(e.is_loop for e in inc) or len(q.orbits) == 1:
            continue
        rest_orbits = [o for o in q.orbits if o != v]
        rest_edges = [e for e in q.edges if v not in (e.u, e.v)]
        for k in range(3):
            ei, ej = [inc[t] for t in range(3) if t != k]
            ek = inc[k]
            x, y = ei.other(v), ej.other(v)
            g = ei.gain * ej.gain
            if x == y and g != -1:
                continue
            if x == y and mode == ANTI:
                continue
            rid = fresh()
            pred = _try(rest_orbits, rest_edges + [GainEdge(rid, x, y, g)])
            if pred is None:
                continue
            move = H2(v, rid, (ei.id, x, ei.gain), (ej.id, y, ej.gain), (ek.id, ek.other(v), ek.gain))
            out.append(InverseCandidate(move, pred))
    return out


def _pair_edges(edges, a, b):
    return [e for e in edges if {e.u, e.v} == {a, b} and not e.is_loop]


def _inverse_k4(q, mode, fresh):
    out = []
    for S in itertools.combinations(q.orbits, 4):
        induced = q.induced_edges(S)
        if len(induced) < 6 or len(induced) > 7:
            continue
        options = [_pair_edges(induced, S[i], S[j]) for i, j in K4_PAIRS]
        if any(not o for o in options):
            continue
        for choice in itertools.product(*options):
            ids = {e.id for e in choice}
            bal = balance(q, ids)
            if not bal.balanced:
                continue
            extra = [e for e in induced if e.id not in ids]
            if mode == ANTI and extra:
                continue
            flip = tuple(o for o in S if bal.signing[o] < 0)
            qs = switch_many(q, flip)
            em = qs.edge_map()
            v = S[0]
            Sset = set(S)
            edges = []
            redis = []
            for e in qs.edges:
                if e.id in ids:
                    continue
                if e.u in Sset and e.v in Sset:
                    continue  # the extra edge, re-added as a loop below
                if e.u in Sset or e.v in Sset:
                    y = e.u if e.u in Sset else e.v
                    x = e.other(y)
                    edges.append(GainEdge(e.id, x, v, e.gain))
                    redis.append((e.id, y))
                else:
                    edges.append(e)
            loop = None
            if extra:
                ex = em[extra[0].id]
                edges.append(GainEdge(ex.id, v, v, -1))
                loop = (ex.id, ex.u, ex.v)
            pred = _try([o for o in q.orbits if o not in Sset or o == v], edges)
            if pred is None:
                continue
            move = VertexToK4(v, tuple(S[1:]), tuple(e.id for e in choice), tuple(redis), loop)
            out.append(InverseCandidate(move, pred, flip))
    return out


def _inverse_k3(q, mode, fresh):
    out = []
    for v0, v1 in itertools.combinations(q.orbits, 2):
        for u in q.orbits:
            if u in (v0, v1):
                continue
            for a in _pair_edges(q.edges, v0, v1):
                for b in _pair_edges(q.edges, v0, u):
                    for c in _pair_edges(q.edges, v1, u):
                        if a.gain * b.gain * c.gain != 1:
                            continue
                        # signing making a, b, c trivial with s(v0) = 1
                        s = {v0: 1, v1: a.gain, u: b.gain}
                        flip = tuple(o for o in (v0, v1, u) if s[o] < 0)
                        qs = switch_many(q, flip)
                        tri = {a.id, b.id, c.id}
                        if any(e.id not in tri for e in _pair_edges(qs.edges, v0, v1)):
                            continue
                        tid = fresh()
                        edges = []
                        moved = []
                        for e in qs.edges:
                            if e.id in tri:
                                continue
                            if v1 in (e.u, e.v):
                                if e.is_loop:
                                    e = GainEdge(e.id, v0, v0, -1)
                                else:
                                    e = GainEdge(e.id, v0, e.other(v1), e.gain)
                                moved.append(e.id)
                            edges.append(e)
                        edges.append(GainEdge(tid, v0, u, 1))
                        pred = _try([o for o in q.orbits if o != v1], edges)
                        if pred is None:
                            continue
                        move = EdgeToK3(v0, v1, u, tid, (a.id, b.id, c.id), tuple(moved))
                        out.append(InverseCandidate(move, pred, flip))
    return out


def _components(orbits, edges) -> list[set]:
    adj = {o: set() for o in orbits}
    for e in edges:
        adj[e.u].add(e.v)
        adj[e.v].add(e.u)
    seen, comps = set(), []
    for o in orbits:
        if o in seen:
            continue
        comp, stack = {o}, [o]
        while stack:
            for w in adj[stack.pop()]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(comp)
    return comps


def _inverse_join(q, mode, fresh):
    """Split along a bridge; 2K3-[e] blocks first, then any tight block."""
    out = []
    if len(q.orbits) <= 3:
        return out
    found = []
    for j in q.non_loop_edges():
        rest = [e for e in q.edges if e.id != j.id]
        comps = _components(q.orbits, rest)
        if len(comps) != 2:
            continue
        for y_side in comps:
            if len(y_side) < 3 or len(y_side) == len(q.orbits):
                continue
            y = j.u if j.u in y_side else j.v
            x = j.other(y)
            block = SignedQuotientGraph(
                tuple(o for o in q.orbits if o in y_side),
                tuple(e for e in rest if e.u in y_side),
            )
            pred = _try(
                [o for o in q.orbits if o not in y_side],
                [e for e in rest if e.u not in y_side],
            )
            if pred is None:
                continue
            found.append((not is_two_k3_minus_edge(block), len(block.orbits), EdgeJoin(block, (j.id, x, y, j.gain)), pred))
    found.sort(key=lambda t: (t[0], t[1]))
    for _, _, move, pred in found:
        if move.kind == "EdgeJoin" and not check_gain_sparse(move.block, "221", loopless_required=True).tight:
            continue
        out.append(InverseCandidate(move, pred))
    return out


def inverse_candidates(q: SignedQuotientGraph, mode: str = SYM, verify: bool = True) -> list[InverseCandidate]:
    """Admissible inverse moves of a (2,2,1)-gain-tight graph.

    Every returned predecessor is tight (and loopless in anti mode), and the
    candidate's forward steps rebuild ``q`` exactly.
    """
    if mode not in MODES:
        raise MoveError(f"unknown mode {mode!r}")
    verdict = check_gain_sparse(q, "221", loopless_required=(mode == ANTI))
    if not verdict.tight:
        raise MoveError("graph is not (2,2,1)-gain-tight" + (" and loopless" if mode == ANTI else ""))
    fresh = _Ids(q.edge_ids)
    gens = [_inverse_h1, _inverse_h2, _inverse_k4, _inverse_k3]
    if mode == ANTI:
        gens.append(_inverse_join)
    out = []
    for gen in gens:
        for cand in gen(q, mode, fresh):
            if verify and not _admissible(q, cand, mode):
                continue
            out.append(cand)
    return out


def _admissible(q, cand: InverseCandidate, mode) -> bool:
    pred = cand.predecessor
    if not check_gain_sparse(pred, "221", loopless_required=(mode == ANTI)).tight:
        return False
    try:
        r = pred
        for step in cand.steps():
            r = apply_move(r, step, mode)
    except MoveError:
        return False
    return same_graph(r, q)


def extract_sequence(q: SignedQuotientGraph, mode: str = SYM) -> ConstructionSequence:
    """A construction sequence from the mode's base graph up to ``q``.

    Raises :class:`MoveError` carrying the sparsity witness when ``q`` fails
    the count.
    """
    if mode not in MODES:
        raise MoveError(f"unknown mode {mode!r}")
    verdict = check_gain_sparse(q, "221", loopless_required=(mode == ANTI))
    if not verdict.tight:
        err = MoveError("graph is not (2,2,1)-gain-tight" + (" and loopless" if mode == ANTI else ""))
        err.witness = verdict.witness
        raise err
    steps: list[Move] = []
    cur = q
    while not is_base(cur, mode):
        cands = inverse_candidates(cur, mode)
        if not cands:
            raise MoveError(f"no admissible inverse move found for a tight graph on {len(cur.orbits)} orbits")
        cand = cands[0]
        steps = list(cand.steps()) + steps
        cur = cand.predecessor
    return ConstructionSequence(cur, tuple(steps))


# -- random forward moves -----------------------------------------------------


def random_move(q: SignedQuotientGraph, rng: random.Random, mode: str = SYM, tries: int = 50, require_tight: bool = True) -> Move | None:
    """A random applicable forward move (or None).

    With ``require_tight`` the result is also checked for tightness, which
    forward moves preserve anyway; switching it off lets tests check that.
    """
    ids = _Ids(q.edge_ids, prefix="m")
    orbit_names = set(q.orbits)

    def new_orbit():
        k = len(orbit_names)
        while f"v{k}" in orbit_names:
            k += 1
        orbit_names.add(f"v{k}")
        return f"v{k}"

    kinds = ["H1", "H2", "K4", "K3"] + (["Join"] if mode == ANTI else [])
    for _ in range(tries):
        kind = rng.choice(kinds)
        g = lambda: rng.choice((1, -1))
        m: Move | None = None
        if kind == "H1":
            n = new_orbit()
            shape = rng.choice(["a", "b", "c"] if mode == SYM else ["a", "b"])
            if shape == "a" and len(q.orbits) >= 2:
                t1, t2 = rng.sample(q.orbits, 2)
                m = H1(n, ((ids(), t1, g()), (ids(), t2, g())))
            elif shape == "b":
                t = rng.choice(q.orbits)
                m = H1(n, ((ids(), t, 1), (ids(), t, -1)))
            elif shape == "c":
                m = H1(n, ((ids(), n, -1), (ids(), rng.choice(q.orbits), g())))
        elif kind == "H2":
            cand = [e for e in q.edges if mode == SYM or not e.is_loop]
            if cand:
                e = rng.choice(cand)
                n = new_orbit()
                g1 = g()
                m = H2(n, e.id, (ids(), e.u, g1), (ids(), e.v, g1 * e.gain), (ids(), rng.choice(q.orbits), g()))
        elif kind == "K4":
            v = rng.choice(q.orbits)
            news = (new_orbit(), new_orbit(), new_orbit())
            k4 = (v,) + news
            inc = q.incident(v)
            loop = [e for e in inc if e.is_loop]
            redis = tuple((e.id, rng.choice(k4)) for e in inc if not e.is_loop)
            lp = (loop[0].id, rng.choice(k4), rng.choice(k4)) if loop else None
            m = VertexToK4(v, news, tuple(ids() for _ in range(6)), redis, lp)
        elif kind == "K3":
            triv = [e for e in q.non_loop_edges() if e.gain == 1]
            if triv:
                e = rng.choice(triv)
                v, u = (e.u, e.v) if rng.random() < 0.5 else (e.v, e.u)
                others = [f.id for f in q.incident(v) if f.id != e.id]
                moved = tuple(i for i in others if rng.random() < 0.5)
                m = EdgeToK3(v, new_orbit(), u, e.id, (ids(), ids(), ids()), moved)
        elif kind == "Join":
            names = (new_orbit(), new_orbit(), new_orbit())
            block = two_k3_minus_edge(names, tuple(ids() for _ in range(5)))
            m = EdgeJoin(block, (ids(), rng.choice(q.orbits), rng.choice(names), g()))
        if m is None:
            continue
        try:
            r = apply_move(q, m, mode)
        except MoveError:
            continue
        if not require_tight or check_gain_sparse(r, "221", loopless_required=(mode == ANTI)).tight:
            return m
    return None


def random_sequence(rng: random.Random, n_moves: int, mode: str = SYM, max_orbits: int = 12) -> ConstructionSequence:
    base = unbalanced_loop("v0", "m0") if mode == SYM else two_k3_minus_edge(("v0", "v1", "v2"), ("m01", "m02", "m03", "m04", "m05"))
    q = base
    moves = []
    for _ in range(n_moves):
        if len(q.orbits) + 3 > max_orbits:
            break
        m = random_move(q, rng, mode)
        if m is None:
            break
        q = apply_move(q, m, mode)
        moves.append(m)
    return ConstructionSequence(base, tuple(moves))


# -- JSON ---------------------------------------------------------------------


def _att(t) -> dict:
    return {"id": t[0], "end": t[1], "gain": t[2]}


def move_to_json(m: Move) -> dict:
    if isinstance(m, H1):
        return {"type": m.kind, "new": m.new, "edges": [_att(t) for t in m.edges]}
    if isinstance(m, H2):
        return {
            "type": m.kind,
            "new": m.new,
            "removed": m.removed,
            "first": _att(m.first),
            "second": _att(m.second),
            "third": _att(m.third),
        }
    if isinstance(m, VertexToK4):
        return {
            "type": m.kind,
            "orbit": m.orbit,
            "new": list(m.new),
            "k4_edges": list(m.k4_edges),
            "redistribution": [{"id": i, "to": y} for i, y in m.redistribution],
            "loop": None if m.loop is None else {"id": m.loop[0], "u": m.loop[1], "v": m.loop[2]},
        }
    if isinstance(m, EdgeToK3):
        return {
            "type": m.kind,
            "orbit": m.orbit,
            "new": m.new,
            "neighbour": m.neighbour,
            "trivial_edge": m.trivial_edge,
            "triangle": list(m.triangle),
            "to_new": list(m.to_new),
        }
    if isinstance(m, EdgeJoin):
        eid, x, y, g = m.attach
        return {"type": m.kind, "block": m.block.to_json(), "attach": {"id": eid, "from": x, "to": y, "gain": g}}
    if isinstance(m, Switch):
        return {"type": "Switch", "orbits": list(m.orbits)}
    raise MoveError(f"unknown move {m!r}")


def _tup(d) -> tuple[str, str, int]:
    return (d["id"], d["end"], int(d["gain"]))


def move_from_json(d: dict) -> Move:
    t = d["type"]
    if t in ("H1a", "H1b", "H1c"):
        m = H1(d["new"], tuple(_tup(x) for x in d["edges"]))
    elif t in ("H2a", "H2b", "H2c"):
        m = H2(d["new"], d["removed"], _tup(d["first"]), _tup(d["second"]), _tup(d["third"]))
    elif t == "VertexToK4":
        lp = d.get("loop")
        return VertexToK4(
            d["orbit"],
            tuple(d["new"]),
            tuple(d["k4_edges"]),
            tuple((r["id"], r["to"]) for r in d["redistribution"]),
            None if lp is None else (lp["id"], lp["u"], lp["v"]),
        )
    elif t == "EdgeToK3":
        return EdgeToK3(d["orbit"], d["new"], d["neighbour"], d["trivial_edge"], tuple(d["triangle"]), tuple(d.get("to_new", ())))
    elif t in ("K3Join", "EdgeJoin"):
        a = d["attach"]
        m = EdgeJoin(SignedQuotientGraph.from_json(d["block"]), (a["id"], a["from"], a["to"], int(a["gain"])))
    elif t == "Switch":
        return Switch(tuple(d["orbits"]))
    else:
        raise MoveError(f"unknown move type {t!r}")
    if m.kind != t:
        raise MoveError(f"move declared as {t} is a {m.kind}")
    return m


def sequence_to_json(seq: ConstructionSequence, mode: str | None = None) -> dict:
    d = {
        "base": {"kind": seq.base_kind, "graph": seq.base.to_json()},
        "moves": [move_to_json(m) for m in seq.moves],
    }
    if mode is not None:
        d = {"mode": mode, **d}
    return d


def sequence_from_json(doc: dict) -> ConstructionSequence:
    base = SignedQuotientGraph.from_json(doc["base"]["graph"])
    seq = ConstructionSequence(base, tuple(move_from_json(m) for m in doc["moves"]))
    declared = doc["base"].get("kind")
    if declared is not None and declared != seq.base_kind:
        raise MoveError(f"base declared as {declared} is a {seq.base_kind}")
    return seq
