"""Signed quotient graphs (Z2-gain graphs) and their covering graphs.

A signed quotient graph has one vertex per vertex orbit ``[v] = {v, -v}`` and
one edge per edge orbit.  Each edge carries a gain in ``{+1, -1}`` recording
whether it joins two chosen orbit representatives (``+1``) or a
representative and the mirror image of another (``-1``).  Fixed edges
``v(-v)`` become loops of gain ``-1``.

Covering vertices built here are ``(orbit, +1)`` for the representative and
``(orbit, -1)`` for its image.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence


class QuotientError(ValueError):
    """Raised for inputs that violate gain-graph or covering-graph invariants."""


@dataclass(frozen=True)
class GainEdge:
    id: str
    u: str
    v: str
    gain: int

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    def other(self, x: str) -> str:
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise KeyError(x)

    def key(self) -> tuple:
        a, b = sorted((self.u, self.v))
        return (a, b, self.gain)


@dataclass(frozen=True)
class SignedQuotientGraph:
    orbits: tuple[str, ...]
    edges: tuple[GainEdge, ...]

    def __post_init__(self):
        object.__setattr__(self, "orbits", tuple(self.orbits))
        object.__setattr__(self, "edges", tuple(self.edges))
        self.validate()

    # -- construction -------------------------------------------------------

    @classmethod
    def from_triples(cls, orbits: Iterable[str], triples: Iterable[tuple], prefix: str = "e") -> "SignedQuotientGraph":
        """Build from ``(u, v, gain)`` or ``(id, u, v, gain)`` tuples."""
        edges = []
        for i, t in enumerate(triples):
            if len(t) == 3:
                edges.append(GainEdge(f"{prefix}{i + 1}", t[0], t[1], int(t[2])))
            else:
                edges.append(GainEdge(str(t[0]), t[1], t[2], int(t[3])))
        return cls(tuple(orbits), tuple(edges))

    def validate(self) -> None:
        if len(set(self.orbits)) != len(self.orbits):
            raise QuotientError("duplicate orbit id")
        orbit_set = set(self.orbits)
        ids = set()
        seen = set()
        for e in self.edges:
            if e.id in ids:
                raise QuotientError(f"duplicate edge id {e.id!r}")
            ids.add(e.id)
            if e.u not in orbit_set or e.v not in orbit_set:
                raise QuotientError(f"edge {e.id!r} uses an unknown orbit")
            if e.gain not in (1, -1):
                raise QuotientError(f"edge {e.id!r} has gain {e.gain}, expected +1 or -1")
            if e.is_loop and e.gain != -1:
                raise QuotientError(f"loop {e.id!r} must have gain -1")
            k = e.key()
            if k in seen:
                # parallel edges with equal gain, or a second loop
                raise QuotientError(f"edge {e.id!r} duplicates an edge with the same ends and gain")
            seen.add(k)

    # -- queries ------------------------------------------------------------

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    def edge(self, eid: str) -> GainEdge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise KeyError(eid)

    def edge_map(self) -> dict[str, GainEdge]:
        return {e.id: e for e in self.edges}

    def incident(self, orbit: str) -> list[GainEdge]:
        return [e for e in self.edges if orbit in (e.u, e.v)]

    def degree(self, orbit: str) -> int:
        """Number of incident edge orbits (a loop counts once)."""
        return len(self.incident(orbit))

    def loops(self) -> list[GainEdge]:
        return [e for e in self.edges if e.is_loop]

    def non_loop_edges(self) -> list[GainEdge]:
        return [e for e in self.edges if not e.is_loop]

    def has_loops(self) -> bool:
        return any(e.is_loop for e in self.edges)

    def neighbours(self, orbit: str) -> set[str]:
        return {e.other(orbit) for e in self.incident(orbit) if not e.is_loop}

    def induced_edges(self, orbits: Iterable[str]) -> list[GainEdge]:
        s = set(orbits)
        return [e for e in self.edges if e.u in s and e.v in s]

    def subgraph(self, edge_ids: Iterable[str]) -> list[GainEdge]:
        em = self.edge_map()
        out = []
        for eid in edge_ids:
            if eid not in em:
                raise QuotientError(f"edge {eid!r} is not in the graph")
            out.append(em[eid])
        return out

    # -- functional updates -------------------------------------------------

    def replace(self, orbits=None, edges=None) -> "SignedQuotientGraph":
        return SignedQuotientGraph(
            self.orbits if orbits is None else tuple(orbits),
            self.edges if edges is None else tuple(edges),
        )

    def relabel(self, mapping: Mapping[str, str]) -> "SignedQuotientGraph":
        m = lambda x: mapping.get(x, x)
        return SignedQuotientGraph(
            tuple(m(o) for o in self.orbits),
            tuple(GainEdge(e.id, m(e.u), m(e.v), e.gain) for e in self.edges),
        )

    def edge_multiset(self) -> Counter:
        return Counter(e.key() for e in self.edges)

    # -- JSON ---------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "orbits": list(self.orbits),
            "edges": [{"id": e.id, "u": e.u, "v": e.v, "gain": e.gain} for e in self.edges],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "SignedQuotientGraph":
        edges = tuple(GainEdge(str(e["id"]), str(e["u"]), str(e["v"]), int(e["gain"])) for e in doc["edges"])
        return cls(tuple(str(o) for o in doc["orbits"]), edges)


@dataclass(frozen=True)
class CoveringGraph:
    """A simple graph with a fixed-point-free involution on its vertices."""

    vertices: tuple[Hashable, ...]
    edges: tuple[tuple[Hashable, Hashable], ...]
    involution: Mapping[Hashable, Hashable] = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "involution", dict(self.involution))
        self.validate()

    def validate(self) -> None:
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise QuotientError("duplicate covering vertex")
        inv = self.involution
        for v in self.vertices:
            if v not in inv or inv[v] not in vs:
                raise QuotientError(f"involution undefined at {v!r}")
            if inv[v] == v:
                raise QuotientError(f"involution fixes vertex {v!r}")
            if inv[inv[v]] != v:
                raise QuotientError(f"involution is not of order 2 at {v!r}")
        es = set()
        for v, w in self.edges:
            if v == w:
                raise QuotientError("covering graph has a loop")
            if v not in vs or w not in vs:
                raise QuotientError("covering edge uses an unknown vertex")
            k = frozenset((v, w))
            if k in es:
                raise QuotientError("covering graph has a duplicate edge")
            es.add(k)
        for v, w in self.edges:
            if frozenset((inv[v], inv[w])) not in es:
                raise QuotientError(f"edge set not closed under the involution at {v!r}{w!r}")

    def edge_set(self) -> set[frozenset]:
        return {frozenset(e) for e in self.edges}

    def neg(self, v: Hashable) -> Hashable:
        return self.involution[v]

    def fixed_edges(self) -> list[tuple]:
        return [(v, w) for v, w in self.edges if self.involution[v] == w]


def cover_vertex(orbit: str, sign: int = 1) -> tuple[str, int]:
    return (orbit, sign)


def covering_edge_pair(e: GainEdge) -> list[tuple[tuple, tuple]]:
    """Covering edges of one gain edge: ``{u~, g v~}`` and its image."""
    if e.is_loop:
        return [((e.u, 1), (e.u, -1))]
    return [((e.u, 1), (e.v, e.gain)), ((e.u, -1), (e.v, -e.gain))]


def build_covering(q: SignedQuotientGraph) -> CoveringGraph:
    q.validate()
    vertices = []
    inv = {}
    for o in q.orbits:
        vertices += [(o, 1), (o, -1)]
        inv[(o, 1)] = (o, -1)
        inv[(o, -1)] = (o, 1)
    edges = []
    for e in q.edges:
        edges += covering_edge_pair(e)
    return CoveringGraph(tuple(vertices), tuple(edges), inv)


def build_quotient(g: CoveringGraph, reps: Iterable[Hashable], orbit_names: Mapping[Hashable, str] | None = None) -> SignedQuotientGraph:
    """Quotient of a covering graph relative to a transversal ``reps``.

    Orbit ids default to ``str(rep)``; edge ids are ``e1, e2, ...`` in the
    order edge orbits first appear in ``g.edges``.
    """
    reps = list(reps)
    rep_set = set(reps)
    if len(rep_set) != len(reps):
        raise QuotientError("duplicate representative")
    inv = g.involution
    covered = set()
    for r in reps:
        if r not in inv:
            raise QuotientError(f"{r!r} is not a covering vertex")
        if inv[r] in rep_set:
            raise QuotientError(f"{r!r} and its image are both representatives")
        covered |= {r, inv[r]}
    if covered != set(g.vertices):
        raise QuotientError("representatives do not meet every vertex orbit")
    name = {r: (orbit_names[r] if orbit_names else str(r)) for r in reps}
    rep_of = {}
    for r in reps:
        rep_of[r] = (name[r], 1)
        rep_of[inv[r]] = (name[r], -1)
    seen = set()
    edges = []
    for v, w in g.edges:
        k = frozenset((v, w))
        if k in seen:
            continue
        seen |= {k, frozenset((inv[v], inv[w]))}
        (a, sa), (b, sb) = rep_of[v], rep_of[w]
        gain = sa * sb
        if a == b:
            gain = -1
        if a > b:
            a, b = b, a
        edges.append(GainEdge(f"e{len(edges) + 1}", a, b, gain))
    return SignedQuotientGraph(tuple(name[r] for r in reps), tuple(edges))


def switch(q: SignedQuotientGraph, orbit: str) -> SignedQuotientGraph:
    """Replace the representative of ``orbit`` by its image.

    Non-loop edges at ``orbit`` flip gain; loops keep gain -1.
    """
    if orbit not in q.orbits:
        raise QuotientError(f"unknown orbit {orbit!r}")
    edges = []
    for e in q.edges:
        if not e.is_loop and orbit in (e.u, e.v):
            e = GainEdge(e.id, e.u, e.v, -e.gain)
        edges.append(e)
    return q.replace(edges=edges)


def switch_many(q: SignedQuotientGraph, orbits: Iterable[str]) -> SignedQuotientGraph:
    flip = set(orbits)
    unknown = flip - set(q.orbits)
    if unknown:
        raise QuotientError(f"unknown orbits {sorted(unknown)}")
    edges = []
    for e in q.edges:
        if not e.is_loop and ((e.u in flip) != (e.v in flip)):
            e = GainEdge(e.id, e.u, e.v, -e.gain)
        edges.append(e)
    return q.replace(edges=edges)


class ParityUnionFind:
    """Union-find storing each element's parity relative to its root.

    ``union(a, b, p)`` records ``s(a) * s(b) == p``; it returns False when the
    constraint contradicts the ones already recorded.
    """

    def __init__(self, items: Iterable[Hashable] = ()):
        self.parent: dict = {}
        self.parity: dict = {}
        self.size: dict = {}
        for x in items:
            self.add(x)

    def add(self, x) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.parity[x] = 1
            self.size[x] = 1

    def find(self, x) -> tuple[Hashable, int]:
        self.add(x)
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root = x
        # compress, accumulating parity from the top of the path down
        acc = 1
        for y in reversed(path):
            acc *= self.parity[y]
            self.parity[y] = acc
            self.parent[y] = root
        return root, (self.parity[path[0]] if path else 1)

    def sign(self, x) -> int:
        return self.find(x)[1]

    def union(self, a, b, p: int) -> bool:
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return pa * pb == p
        if self.size[ra] < self.size[rb]:
            ra, rb, pa, pb = rb, ra, pb, pa
        self.parent[rb] = ra
        self.parity[rb] = pa * pb * p
        self.size[ra] += self.size[rb]
        return True

    def connected(self, a, b) -> bool:
        return self.find(a)[0] == self.find(b)[0]


@dataclass(frozen=True)
class BalanceResult:
    balanced: bool
    signing: dict[str, int] | None = None


def _edges_of(q: SignedQuotientGraph, edge_subset) -> list[GainEdge]:
    if edge_subset is None:
        return list(q.edges)
    return q.subgraph(edge_subset)


def balance(q: SignedQuotientGraph, edge_subset: Iterable[str] | None = None) -> BalanceResult:
    """Decide whether an edge set is balanced; return a signing certificate.

    When balanced, ``signing[u] * signing[v] == gain`` for every edge and
    ``switch_many(q, [o for o, s in signing.items() if s < 0])`` makes all
    of these gains +1.
    """
    edges = _edges_of(q, edge_subset)
    uf = ParityUnionFind()
    for e in edges:
        if e.is_loop:
            return BalanceResult(False)
        if not uf.union(e.u, e.v, e.gain):
            return BalanceResult(False)
    verts = {x for e in edges for x in (e.u, e.v)}
    return BalanceResult(True, {v: uf.sign(v) for v in sorted(verts)})


def is_balanced(edges: Iterable[GainEdge]) -> bool:
    uf = ParityUnionFind()
    for e in edges:
        if e.is_loop or not uf.union(e.u, e.v, e.gain):
            return False
    return True


def cycle_gains_balanced(q: SignedQuotientGraph, edge_subset: Iterable[str] | None = None) -> bool:
    """Balance by the definition: every fundamental cycle has gain +1.

    Builds a spanning forest by BFS and multiplies gains around the cycle
    closed by each non-forest edge.  Used to cross-check :func:`balance`.
    """
    edges = _edges_of(q, edge_subset)
    adj = defaultdict(list)
    for e in edges:
        if e.is_loop:
            return False
        adj[e.u].append(e)
        adj[e.v].append(e)
    pot: dict[str, int] = {}
    tree = set()
    for start in sorted(adj):
        if start in pot:
            continue
        pot[start] = 1
        queue = [start]
        while queue:
            x = queue.pop(0)
            for e in adj[x]:
                y = e.other(x)
                if y not in pot:
                    pot[y] = pot[x] * e.gain
                    tree.add(e.id)
                    queue.append(y)
    # the cycle closed by a non-tree edge uv has gain pot(u) * gain * pot(v)
    return all(pot[e.u] * e.gain * pot[e.v] == 1 for e in edges if e.id not in tree)


@dataclass(frozen=True)
class ComponentInfo:
    orbits: tuple[str, ...]
    edge_ids: tuple[str, ...]
    balanced: bool

    @property
    def n_vertices(self) -> int:
        return len(self.orbits)

    @property
    def n_edges(self) -> int:
        return len(self.edge_ids)


@dataclass(frozen=True)
class SubgraphClassification:
    spanning: bool
    connected: bool
    is_tree: bool
    is_unbalanced_map_graph: bool
    contains_connected_spanning_unbalanced_map_graph: bool
    components: tuple[ComponentInfo, ...]
    # spanning tree plus one edge closing an unbalanced cycle, when it exists
    certificate: tuple[str, ...] | None = None

    def to_json(self) -> dict:
        return {
            "spanning": self.spanning,
            "connected": self.connected,
            "is_tree": self.is_tree,
            "is_unbalanced_map_graph": self.is_unbalanced_map_graph,
            "contains_connected_spanning_unbalanced_map_graph": self.contains_connected_spanning_unbalanced_map_graph,
            "components": [
                {"orbits": list(c.orbits), "edges": list(c.edge_ids), "balanced": c.balanced}
                for c in self.components
            ],
            "certificate": list(self.certificate) if self.certificate is not None else None,
        }


def classify_subgraph(q: SignedQuotientGraph, edge_subset: Iterable[str]) -> SubgraphClassification:
    """Structural classification of the subgraph spanned by ``edge_subset``.

    The subgraph's vertex set is the set of endpoints of its edges;
    ``spanning`` means that set is all of ``q.orbits``.  A single orbit with
    no edges counts as spanned by the empty set, so on a one-orbit graph the
    empty subgraph is a spanning tree.
    """
    edges = q.subgraph(list(edge_subset))
    verts = {x for e in edges for x in (e.u, e.v)}
    if not edges and len(q.orbits) == 1:
        verts = set(q.orbits)
    spanning = verts == set(q.orbits)

    comp_uf = ParityUnionFind(sorted(verts))
    for e in edges:
        comp_uf.union(e.u, e.v, 1)
    groups: dict = defaultdict(list)
    for v in sorted(verts):
        groups[comp_uf.find(v)[0]].append(v)
    comps = []
    for members in sorted(groups.values()):
        mset = set(members)
        ce = [e for e in edges if e.u in mset]
        comps.append(ComponentInfo(tuple(members), tuple(e.id for e in ce), is_balanced(ce)))
    comps = tuple(comps)
    connected = len(comps) == 1
    is_tree = connected and comps[0].balanced and comps[0].n_edges == comps[0].n_vertices - 1
    is_map = bool(comps) and all(c.n_edges == c.n_vertices and not c.balanced for c in comps)
    contains = spanning and connected and not comps[0].balanced

    cert = None
    if contains:
        # spanning tree by union-find, then the first edge that closes an
        # unbalanced cycle with it
        uf = ParityUnionFind()
        tree = []
        rest = []
        for e in edges:
            if not e.is_loop and not uf.connected(e.u, e.v):
                uf.union(e.u, e.v, e.gain)
                tree.append(e.id)
            else:
                rest.append(e)
        for e in rest:
            if e.is_loop or uf.sign(e.u) * uf.sign(e.v) != e.gain:
                cert = tuple(tree + [e.id])
                break
    return SubgraphClassification(spanning, connected, is_tree, is_map, contains, comps, cert)


# -- switching equivalence and isomorphism ----------------------------------


def switching_signing(a: SignedQuotientGraph, b: SignedQuotientGraph) -> dict[str, int] | None:
    """A signing ``s`` with ``switch(a, s) == b`` edge-for-edge, ignoring ids.

    Both graphs must use the same orbit labels.  Returns None if no such
    signing exists.
    """
    if set(a.orbits) != set(b.orbits) or len(a.edges) != len(b.edges):
        return None
    la = sorted(e.u for e in a.loops())
    lb = sorted(e.u for e in b.loops())
    if la != lb:
        return None
    pa: dict = defaultdict(list)
    pb: dict = defaultdict(list)
    for e in a.non_loop_edges():
        pa[frozenset((e.u, e.v))].append(e.gain)
    for e in b.non_loop_edges():
        pb[frozenset((e.u, e.v))].append(e.gain)
    if set(pa) != set(pb):
        return None
    uf = ParityUnionFind(a.orbits)
    for k, ga in pa.items():
        gb = pb[k]
        if len(ga) != len(gb):
            return None
        if len(ga) == 1:
            x, y = tuple(k)
            if not uf.union(x, y, ga[0] * gb[0]):
                return None
    return {o: uf.sign(o) for o in a.orbits}


def switching_equivalent(a: SignedQuotientGraph, b: SignedQuotientGraph) -> bool:
    return switching_signing(a, b) is not None


def _degree_profile(q: SignedQuotientGraph) -> dict[str, tuple]:
    prof = {}
    for o in q.orbits:
        inc = q.incident(o)
        loops = sum(1 for e in inc if e.is_loop)
        nbrs = Counter(e.other(o) for e in inc if not e.is_loop)
        prof[o] = (len(inc), loops, tuple(sorted(nbrs.values())))
    return prof


def find_switching_isomorphism(a: SignedQuotientGraph, b: SignedQuotientGraph) -> tuple[dict, dict] | None:
    """Return ``(relabel a->b, signing)`` witnessing a switching isomorphism."""
    if len(a.orbits) != len(b.orbits) or len(a.edges) != len(b.edges):
        return None
    pa, pb = _degree_profile(a), _degree_profile(b)
    if sorted(pa.values()) != sorted(pb.values()):
        return None
    by_prof: dict = defaultdict(list)
    for o in b.orbits:
        by_prof[pb[o]].append(o)
    order = list(a.orbits)
    choices = [by_prof[pa[o]] for o in order]
    for image in itertools.product(*choices):
        if len(set(image)) != len(image):
            continue
        mapping = dict(zip(order, image))
        s = switching_signing(a.relabel(mapping), b)
        if s is not None:
            return mapping, s
    return None


def switching_isomorphic(a: SignedQuotientGraph, b: SignedQuotientGraph) -> bool:
    return find_switching_isomorphism(a, b) is not None


def canonical_form(q: SignedQuotientGraph) -> tuple:
    """A switching- and relabelling-invariant key (brute force, small graphs).

    Minimises the sorted list of ``(i, j, gain)`` triples over every orbit
    ordering and every switching.
    """
    n = len(q.orbits)
    best = None
    for perm in itertools.permutations(range(n)):
        idx = {o: perm[i] for i, o in enumerate(q.orbits)}
        base = [(idx[e.u], idx[e.v], e.gain, e.is_loop) for e in q.edges]
        for mask in range(1 << n):
            key = []
            for i, j, g, loop in base:
                if not loop and ((mask >> i) & 1) != ((mask >> j) & 1):
                    g = -g
                key.append((min(i, j), max(i, j), g))
            key.sort()
            key = tuple(key)
            if best is None or key < best:
                best = key
    return (n, best)
