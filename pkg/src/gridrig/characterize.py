"""Combinatorial rigidity predicates from monochrome decompositions.

The symmetric predicate asks the ``F1`` quotient subgraph to be a spanning
unbalanced map graph and the ``F2`` subgraph a spanning tree; the
anti-symmetric one swaps the roles.  Infinitesimal rigidity asks both
subgraphs to be spanning, connected and unbalanced.  :func:`crosscheck`
compares all of this against exact orbit-matrix ranks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .geometry import (
    F1,
    F2,
    LINF,
    GeometryError,
    IllPositioned,
    MonochromeDecomposition,
    QuadNorm,
    SymmetricFramework,
    colour_edges,
    edge_colour,
    sub,
    validate_symmetric,
)
from .quotient import GainEdge, SignedQuotientGraph, SubgraphClassification, classify_subgraph
from .rigidity import rigidity_report


@dataclass(frozen=True)
class CharacterizationReport:
    decomposition: MonochromeDecomposition
    sym_isostatic_c: bool
    anti_isostatic_c: bool
    inf_rigid_c: bool
    nonsym_isostatic_c: bool
    classes: dict[str, SubgraphClassification]
    certificates: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "colours": dict(self.decomposition.colour),
            "predicates": {
                "sym_isostatic_c": self.sym_isostatic_c,
                "anti_isostatic_c": self.anti_isostatic_c,
                "inf_rigid_c": self.inf_rigid_c,
                "nonsym_isostatic_c": self.nonsym_isostatic_c,
            },
            "subgraphs": {c: list(self.decomposition.edges_of(c)) for c in (F1, F2)},
            "certificates": {k: (list(v) if v is not None else None) for k, v in self.certificates.items()},
        }


def _covering_spanning_tree(f: SymmetricFramework, colour: str) -> bool:
    """Whether the covering-level monochrome subgraph is a spanning tree."""
    verts = list(f.placement)
    parent = {v: v for v in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    n_edges = 0
    for _, v, w in f.covering_edges():
        if edge_colour(f.norm, sub(f.placement[v], f.placement[w])) != colour:
            continue
        n_edges += 1
        a, b = find(v), find(w)
        if a == b:
            return False
        parent[a] = b
    return n_edges == len(verts) - 1


def characterize(f: SymmetricFramework) -> CharacterizationReport:
    """Monochrome-subgraph predicates; raises :class:`IllPositioned` if needed."""
    dec = colour_edges(f)
    q = f.quotient
    c1 = classify_subgraph(q, dec.edges_of(F1))
    c2 = classify_subgraph(q, dec.edges_of(F2))
    span_map_1 = c1.spanning and c1.is_unbalanced_map_graph
    span_map_2 = c2.spanning and c2.is_unbalanced_map_graph
    span_tree_1 = c1.spanning and c1.is_tree
    span_tree_2 = c2.spanning and c2.is_tree
    if len(q.orbits) == 1 and len(q.edges) == 1 and q.edges[0].is_loop:
        # covering graph K2 with its fixed bar: symmetrically isostatic outright
        sym_c = True
    else:
        sym_c = span_map_1 and span_tree_2
    anti_c = span_tree_1 and span_map_2
    rigid_c = c1.contains_connected_spanning_unbalanced_map_graph and c2.contains_connected_spanning_unbalanced_map_graph
    nonsym_c = _covering_spanning_tree(f, F1) and _covering_spanning_tree(f, F2)
    certs = {}
    if sym_c:
        certs["map_graph"] = dec.edges_of(F1)
        certs["tree"] = dec.edges_of(F2)
    elif anti_c:
        certs["tree"] = dec.edges_of(F1)
        certs["map_graph"] = dec.edges_of(F2)
    if rigid_c:
        certs["rigid_F1"] = c1.certificate
        certs["rigid_F2"] = c2.certificate
    return CharacterizationReport(dec, sym_c, anti_c, rigid_c, nonsym_c, {F1: c1, F2: c2}, certs)


class CrosscheckFailure(AssertionError):
    def __init__(self, record: dict):
        self.record = record
        super().__init__(f"combinatorial and rank verdicts disagree on {record['predicate']}")


PREDICATE_PAIRS = (
    ("sym_isostatic", "sym_isostatic_c"),
    ("anti_isostatic", "anti_isostatic_c"),
    ("inf_rigid", "inf_rigid_c"),
    ("isostatic", "nonsym_isostatic_c"),
)


def crosscheck(f: SymmetricFramework, raise_on_failure: bool = False) -> dict:
    """Compare the four combinatorial predicates with their rank versions.

    Returns ``{"agree": True, ...}`` or a record of the first disagreement
    with the framework and both reports.
    """
    rep = rigidity_report(f)
    ch = characterize(f)
    verdicts = {}
    for rank_name, comb_name in PREDICATE_PAIRS:
        a, b = getattr(rep, rank_name), getattr(ch, comb_name)
        verdicts[rank_name] = a
        if a != b:
            record = {
                "agree": False,
                "predicate": rank_name,
                "rank_verdict": a,
                "combinatorial_verdict": b,
                "framework": f.to_json(),
                "report": rep.to_json(),
                "characterization": ch.to_json(),
            }
            if raise_on_failure:
                raise CrosscheckFailure(record)
            return record
    return {"agree": True, "verdicts": verdicts}


# -- random generation -------------------------------------------------------


def random_quotient(rng: random.Random, max_orbits: int = 5, n_edges: int | None = None, loops: bool | None = None, max_edges: int | None = None) -> SignedQuotientGraph:
    """A random valid signed quotient graph.

    Without ``n_edges`` the edge count is drawn near ``2|V0| - 1`` so that
    isostatic instances are common.  ``loops=None`` allows loops in half of
    the draws.
    """
    n = rng.randint(1, max_orbits)
    if loops is None:
        loops = n == 1 or rng.random() < 0.5
    orbits = [chr(ord("a") + i) for i in range(n)]
    slots = []
    if loops:
        slots += [(o, o, -1) for o in orbits]
    for i in range(n):
        for j in range(i + 1, n):
            slots += [(orbits[i], orbits[j], 1), (orbits[i], orbits[j], -1)]
    if n_edges is None:
        target = 2 * n - 1 + rng.choice([-2, -1, 0, 0, 0, 0, 1, 1, 2])
    else:
        target = n_edges
    if max_edges is not None:
        target = min(target, max_edges)
    target = max(0, min(target, len(slots)))
    chosen = rng.sample(slots, target)
    return SignedQuotientGraph.from_triples(orbits, chosen)


def random_framework(
    rng: random.Random,
    q: SignedQuotientGraph | None = None,
    norm: QuadNorm = LINF,
    max_orbits: int = 5,
    grid: int = 8,
    denominator: int = 2,
    retries: int = 200,
) -> SymmetricFramework:
    """Sample representative coordinates on a rational grid until well-positioned."""
    if q is None:
        q = random_quotient(rng, max_orbits)
    for _ in range(retries):
        reps = {
            o: (Fraction(rng.randint(-grid, grid), denominator), Fraction(rng.randint(-grid, grid), denominator))
            for o in q.orbits
        }
        try:
            f = SymmetricFramework(q, reps, norm)
        except GeometryError:
            continue
        diag = validate_symmetric(f)
        if not diag.valid or diag.mirror_vertices:
            continue
        try:
            colour_edges(f)
        except IllPositioned:
            continue
        return f
    raise GeometryError(f"no well-positioned placement found in {retries} attempts")


def crosscheck_batch(n_cases: int, max_orbits: int = 5, seed: int = 0, norm: QuadNorm = LINF) -> dict:
    """Run :func:`crosscheck` on ``n_cases`` seeded random frameworks."""
    rng = random.Random(seed)
    failures = []
    positives = {name: 0 for name, _ in PREDICATE_PAIRS}
    for _ in range(n_cases):
        f = random_framework(rng, norm=norm, max_orbits=max_orbits)
        rec = crosscheck(f)
        if not rec["agree"]:
            failures.append(rec)
            continue
        for k, v in rec["verdicts"].items():
            positives[k] += int(v)
    return {
        "cases": n_cases,
        "agreements": n_cases - len(failures),
        "failures": failures,
        "positives": positives,
    }
