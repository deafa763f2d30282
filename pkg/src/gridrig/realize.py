"""Constructive and random realisations of tight signed quotient graphs.

The constructive realiser follows a construction sequence and places each
new vertex next to an anchor point chosen so the new edges get prescribed
colours, then shrinks a perturbation radius until every check passes.
Work happens in normalised coordinates, where the mirror is the vertical
axis and ``F1`` bars are the mostly-horizontal ones; the final placement is
carried over to the requested norm by the inverse normalising map.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping

from .characterize import characterize
from .geometry import (
    F1,
    F2,
    LINF,
    GeometryError,
    IllPositioned,
    QuadNorm,
    SymmetricFramework,
    colour_edges,
    make_norm,
    validate_symmetric,
)
from .moves import (
    ANTI,
    H1,
    H2,
    MODES,
    SYM,
    ConstructionSequence,
    EdgeJoin,
    EdgeToK3,
    MoveError,
    Switch,
    VertexToK4,
    apply_move,
    extract_sequence,
    k4_plus_edge,
    two_k3_minus_edge,
)
from .quotient import SignedQuotientGraph, find_switching_isomorphism
from .rigidity import rigidity_report

NORMAL = make_norm((1, 0), (0, 1))

Vec = tuple[Fraction, Fraction]

# frozen placements, normalised coordinates, for the canonical base graphs
LOOP_PLACEMENT = {"a": (1, 0)}
TWO_K3_PLACEMENT = {"a": (-1, 0), "b": (-1, 3), "c": (-3, 0)}
K4_PLUS_EDGE_PLACEMENT = {"a": (1, 2), "b": (-2, 0), "c": (-1, -2), "d": (1, -1)}

# isostatic K4 whose monochrome subgraphs are the paths 0-1-2-3 and 2-0-3-1
K4_TEMPLATE = ((0, 0), (1, Fraction(1, 5)), (Fraction(-1, 5), 1), (Fraction(6, 5), Fraction(7, 5)))

DIRECTIONS = ((1, 2), (2, 1), (-1, 2), (-2, 1), (1, -2), (2, -1), (-1, -2), (-2, -1), (1, 3), (3, 1), (-3, 1), (1, -3))
MAX_HALVINGS = 64


class RealizationError(GeometryError):
    pass


class RealizationExhausted(RealizationError):
    def __init__(self, attempts: int):
        self.attempts = attempts
        super().__init__(f"no placement with the requested property in {attempts} attempts")


@dataclass(frozen=True)
class Realization:
    framework: SymmetricFramework
    mode: str
    sequence: ConstructionSequence | None = None
    shrink_steps: tuple[int, ...] = ()
    attempts: int = 1
    certificate: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "framework": self.framework.to_json(),
            "attempts": self.attempts,
            "shrink_steps": list(self.shrink_steps),
            "certificate": self.certificate,
        }


def _v(p) -> Vec:
    return (Fraction(p[0]), Fraction(p[1]))


def _mirror(p: Vec) -> Vec:
    return (-p[0], p[1])


def _tau(g: int, p: Vec) -> Vec:
    return p if g == 1 else _mirror(p)


def _add(p: Vec, q, r=1) -> Vec:
    return (p[0] + r * q[0], p[1] + r * q[1])


def _place_canonical(canonical: SignedQuotientGraph, placement: Mapping[str, tuple], target: SignedQuotientGraph) -> dict[str, Vec]:
    iso = find_switching_isomorphism(canonical, target)
    if iso is None:
        raise RealizationError("graph does not match the frozen base placement")
    mapping, signing = iso
    return {mapping[o]: _tau(signing[mapping[o]], _v(p)) for o, p in placement.items()}


def base_placement(base: SignedQuotientGraph) -> dict[str, Vec]:
    if len(base.orbits) == 1:
        return {base.orbits[0]: _v(LOOP_PLACEMENT["a"])}
    if len(base.orbits) == 3:
        return _place_canonical(two_k3_minus_edge(), TWO_K3_PLACEMENT, base)
    if len(base.orbits) == 4:
        return _place_canonical(k4_plus_edge(), K4_PLUS_EDGE_PLACEMENT, base)
    raise RealizationError("no frozen placement for this base graph")


def _predicate(mode: str):
    if mode == SYM:
        return lambda ch: ch.sym_isostatic_c
    if mode == ANTI:
        return lambda ch: ch.anti_isostatic_c
    return lambda ch: ch.inf_rigid_c


def _accept(q, reps, mode, required, previous):
    """The framework if every placement check passes, else None."""
    if any(p[0] == 0 for p in reps.values()):
        return None
    try:
        f = SymmetricFramework(q, reps, NORMAL)
    except GeometryError:
        return None
    if len(set(f.placement.values())) != len(f.placement):
        return None
    if not validate_symmetric(f).valid:
        return None
    try:
        dec = colour_edges(f)
    except IllPositioned:
        return None
    colour = dec.colour
    if any(colour[e] != c for e, c in required.items()):
        return None
    if any(colour[e] != c for e, c in previous.items() if e in colour):
        return None
    if not _predicate(mode)(characterize(f)):
        return None
    return f


def _around(anchor: Vec, dirs=DIRECTIONS, scale=1) -> Iterator[tuple[Vec, int]]:
    yield anchor, 0
    for k in range(MAX_HALVINGS + 1):
        r = Fraction(scale, 2**k)
        for d in dirs:
            yield _add(anchor, d, r), k


def _line_meet(p: Vec, d, q: Vec, e) -> Vec | None:
    det = d[0] * (-e[1]) - d[1] * (-e[0])
    if det == 0:
        return None
    rx, ry = q[0] - p[0], q[1] - p[1]
    t = (rx * (-e[1]) - ry * (-e[0])) / det
    return (p[0] + t * d[0], p[1] + t * d[1])


X1, X2 = (1, 0), (0, 1)


def _facet_dir(c: str):
    return X1 if c == F1 else X2


def _other(c: str) -> str:
    return F2 if c == F1 else F1


def _step_candidates(q, reps, colours, m, new_q) -> Iterator[tuple[dict, int, dict]]:
    """Yield ``(reps, halvings, required colours)`` for one move."""
    if isinstance(m, H1):
        (i1, t1, g1), (i2, t2, g2) = m.edges
        if m.new in (t1, t2):
            (li, _, _), (ei, w, g) = m.edges if t1 == m.new else m.edges[::-1]
            anchor = _tau(g, reps[w])
            for p, k in _around(anchor, ((0, 1), (0, -1)) + DIRECTIONS):
                yield {**reps, m.new: p}, k, {ei: F2, li: F1}
            return
        P1, P2 = _tau(g1, reps[t1]), _tau(g2, reps[t2])
        for c1 in (F1, F2):
            c2 = _other(c1)
            a = _line_meet(P1, _facet_dir(c1), P2, _facet_dir(c2))
            for p, k in _around(a):
                yield {**reps, m.new: p}, k, {i1: c1, i2: c2}
        return
    if isinstance(m, H2):
        e = q.edge(m.removed)
        ce = colours[e.id]
        (i1, x, g1), (i2, y, g2), (i3, z, g3) = m.first, m.second, m.third
        P1, P2, P3 = _tau(g1, reps[x]), _tau(g2, reps[y]), _tau(g3, reps[z])
        d = (P2[0] - P1[0], P2[1] - P1[1])
        a = _line_meet(P1, d, P3, _facet_dir(_other(ce)))
        if a is None:
            return
        for p, k in _around(a, (d, (-d[0], -d[1])) + DIRECTIONS):
            yield {**reps, m.new: p}, k, {i1: ce, i2: ce, i3: _other(ce)}
        return
    if isinstance(m, VertexToK4):
        k4 = (m.orbit,) + tuple(m.new)
        centre = reps[m.orbit]
        tmpl = [_v(t) for t in K4_TEMPLATE]
        dec = {}
        for eid, (i, j) in zip(m.k4_edges, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))):
            diff = (tmpl[i][0] - tmpl[j][0], tmpl[i][1] - tmpl[j][1])
            dec[eid] = F1 if abs(diff[0]) > abs(diff[1]) else F2
        if m.loop is not None:
            dec[m.loop[0]] = F1
        for k in range(MAX_HALVINGS + 1):
            r = Fraction(1, 2**k)
            new = dict(reps)
            for o, t in zip(k4, tmpl):
                new[o] = _add(centre, t, r)
            yield new, k, dec
        return
    if isinstance(m, EdgeToK3):
        c = colours[m.trivial_edge]
        d = _facet_dir(_other(c))
        a, b, cc = m.triangle
        for k in range(MAX_HALVINGS + 1):
            for sgn in (1, -1):
                r = Fraction(sgn, 2**k)
                yield {**reps, m.new: _add(reps[m.orbit], d, r)}, k, {a: _other(c), b: c, cc: c}
        return
    raise RealizationError(f"no placement rule for {m.kind}")


def _join_candidates(reps, m: EdgeJoin, block_reps) -> Iterator[tuple[dict, int, dict]]:
    eid, x, y, g = m.attach
    shift = reps[x][1] - block_reps[y][1]
    moved = {o: (p[0], p[1] + shift) for o, p in block_reps.items()}
    c = reps[x][1]
    factors = [Fraction(1)]
    for k in range(1, MAX_HALVINGS + 1):
        factors += [Fraction(1, 2**k), Fraction(2**k)]
    for k, lam in enumerate(factors):
        scaled = {o: (lam * p[0], c + lam * (p[1] - c)) for o, p in moved.items()}
        yield {**reps, **scaled}, (k + 1) // 2, {eid: F1}


def _realize_normalized(seq: ConstructionSequence, mode: str) -> tuple[dict, list[int]]:
    q = seq.base
    reps = base_placement(q)
    f = _accept(q, reps, mode, {}, {})
    if f is None:
        raise RealizationError("frozen base placement failed its checks")
    colours = dict(colour_edges(f).colour)
    shrinks = []
    for i, m in enumerate(seq.moves):
        try:
            new_q = apply_move(q, m, mode)
        except MoveError as exc:
            raise MoveError(exc.clause, i) from None
        if isinstance(m, Switch):
            reps = {o: (_mirror(p) if o in m.orbits else p) for o, p in reps.items()}
            q = new_q
            shrinks.append(0)
            continue
        if isinstance(m, EdgeJoin):
            if mode != ANTI:
                raise RealizationError("edge joins are only realised in anti mode")
            block_reps, _ = _realize_normalized(extract_sequence(m.block, ANTI), ANTI)
            cands = _join_candidates(reps, m, block_reps)
        else:
            cands = _step_candidates(q, reps, colours, m, new_q)
        for new_reps, k, required in cands:
            f = _accept(new_q, new_reps, mode, required, colours)
            if f is not None:
                break
        else:
            raise RealizationError(f"step {i} ({m.kind}): no valid placement within {MAX_HALVINGS} halvings")
        reps, q = new_reps, new_q
        colours = dict(colour_edges(f).colour)
        shrinks.append(k)
    return reps, shrinks


def transport(q: SignedQuotientGraph, normalized_reps: Mapping[str, tuple], norm: QuadNorm) -> SymmetricFramework:
    """Carry a normalised placement over to ``norm``."""
    return SymmetricFramework.from_normalized(q, {o: _v(p) for o, p in normalized_reps.items()}, norm)


def _certify(f: SymmetricFramework, mode: str) -> dict:
    rep = rigidity_report(f)
    ch = characterize(f)
    key = {SYM: "sym_isostatic", ANTI: "anti_isostatic"}[mode]
    if not getattr(rep, key) or not _predicate(mode)(ch):
        raise RealizationError(f"realised framework is not {key}")
    return {"predicate": key, "ranks": dict(rep.ranks), "nullities": dict(rep.nullities), "characterization": ch.to_json()}


def realize(seq_or_graph, mode: str = SYM, norm: QuadNorm = LINF) -> Realization:
    """Realise a tight graph (or an explicit sequence) as a mode-isostatic framework."""
    if mode not in MODES:
        raise RealizationError(f"unknown mode {mode!r}")
    if isinstance(seq_or_graph, SignedQuotientGraph):
        seq = extract_sequence(seq_or_graph, mode)
    else:
        seq = seq_or_graph
    reps, shrinks = _realize_normalized(seq, mode)
    q = seq.base
    for m in seq.moves:
        q = apply_move(q, m, mode)
    f = transport(q, reps, norm)
    return Realization(f, mode, seq, tuple(shrinks), 1, _certify(f, mode))


def random_realize(
    q: SignedQuotientGraph,
    mode: str = SYM,
    norm: QuadNorm = LINF,
    seed: int = 0,
    attempts: int = 500,
) -> Realization:
    """Sample integer placements on a grid growing with the attempt index."""
    rng = random.Random(seed)
    want = {SYM: "sym_isostatic", ANTI: "anti_isostatic", "rigid": "inf_rigid"}
    if mode not in want:
        raise RealizationError(f"unknown mode {mode!r}")
    for k in range(attempts):
        span = 2 + k // 10
        reps = {o: (rng.randint(-span, span), rng.randint(-span, span)) for o in q.orbits}
        f = _accept(q, {o: _v(p) for o, p in reps.items()}, mode, {}, {})
        if f is None:
            continue
        g = transport(q, reps, norm)
        rep = rigidity_report(g)
        if getattr(rep, want[mode]):
            cert = {
                "predicate": want[mode],
                "ranks": dict(rep.ranks),
                "nullities": dict(rep.nullities),
                "characterization": characterize(g).to_json(),
            }
            return Realization(g, mode, None, (), k + 1, cert)
    raise RealizationExhausted(attempts)
