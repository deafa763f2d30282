"""Rigidity and orbit matrices, flex spaces, and rank-based predicates.

Column layout: covering vertices are ordered orbit by orbit, representative
first, two columns (user coordinates) per vertex.  Orbit-level vectors use
two columns per orbit in ``quotient.orbits`` order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .geometry import (
    Framework,
    IllPositioned,
    QuadNorm,
    SymmetricFramework,
    colour_edges,
    edge_functional,
    sub,
    tau,
)
from .linalg import RationalMatrix, fraction_str, rank as _rank, span_rank
from .quotient import SignedQuotientGraph

ZERO = Fraction(0)


class RigidityError(ValueError):
    pass


def _vertex_order(f: SymmetricFramework) -> list[tuple]:
    return [(o, s) for o in f.quotient.orbits for s in (1, -1)]


def _orbit_cols(q: SignedQuotientGraph) -> list[tuple]:
    return [(o, k) for o in q.orbits for k in ("x", "y")]


def general_rigidity_matrix(fw: Framework) -> RationalMatrix:
    """Rigidity matrix of a plain framework (rows = edges)."""
    fw.colours()
    verts = list(fw.vertices)
    col = {v: 2 * i for i, v in enumerate(verts)}
    rows = []
    for v, w in fw.edges:
        phi = edge_functional(fw.norm, sub(fw.placement[v], fw.placement[w]))
        r = [ZERO] * (2 * len(verts))
        r[col[v]], r[col[v] + 1] = phi
        r[col[w]], r[col[w] + 1] = -phi[0], -phi[1]
        rows.append(r)
    cols = [(v, k) for v in verts for k in ("x", "y")]
    return RationalMatrix(rows, 2 * len(verts), [f"{v}-{w}" for v, w in fw.edges], cols)


def rigidity_matrix(f: SymmetricFramework) -> RationalMatrix:
    """Rigidity matrix ``df`` of the covering framework.

    Row for bar ``vw``: ``+phi`` in the ``v`` block and ``-phi`` in the ``w``
    block where ``phi = s * Fj`` for the bar's colour ``j``.
    """
    colour_edges(f)
    verts = _vertex_order(f)
    col = {v: 2 * i for i, v in enumerate(verts)}
    rows, labels = [], []
    for eid, v, w in f.covering_edges():
        phi = edge_functional(f.norm, sub(f.placement[v], f.placement[w]))
        r = [ZERO] * (2 * len(verts))
        r[col[v]], r[col[v] + 1] = phi
        r[col[w]], r[col[w] + 1] = -phi[0], -phi[1]
        rows.append(r)
        labels.append(eid)
    cols = [(v, k) for v in verts for k in ("x", "y")]
    return RationalMatrix(rows, 2 * len(verts), labels, cols)


def orbit_matrix_sym(f: SymmetricFramework) -> RationalMatrix:
    """Symmetric orbit matrix ``O1`` (rows = all edge orbits).

    Non-loop ``[vw]`` with gain ``g``: the bar ``v~ (g w~)`` has functional
    ``phi``; the row is ``phi`` in ``[v]`` and ``-phi o tau(g)`` in ``[w]``.
    A loop at ``[v]`` has ``2 phi`` in ``[v]`` for the bar ``v~ (-v~)``.
    """
    colour_edges(f)
    q = f.quotient
    idx = {o: 2 * i for i, o in enumerate(q.orbits)}
    rows = []
    for e in q.edges:
        phi = edge_functional(f.norm, f.edge_diff(e))
        r = [ZERO] * (2 * len(q.orbits))
        if e.is_loop:
            r[idx[e.u]] += 2 * phi[0]
            r[idx[e.u] + 1] += 2 * phi[1]
        else:
            r[idx[e.u]] += phi[0]
            r[idx[e.u] + 1] += phi[1]
            psi = _compose_tau(f.norm, phi, e.gain)
            r[idx[e.v]] -= psi[0]
            r[idx[e.v] + 1] -= psi[1]
        rows.append(r)
    return RationalMatrix(rows, 2 * len(q.orbits), [e.id for e in q.edges], _orbit_cols(q))


def _compose_tau(norm: QuadNorm, phi, g: int):
    """Row vector of ``x -> phi(tau(g) x)``."""
    if g == 1:
        return phi
    (a, b), (c, d) = norm.reflection.matrix
    return (phi[0] * a + phi[1] * c, phi[0] * b + phi[1] * d)


def default_orientation(q: SignedQuotientGraph) -> dict[str, tuple[str, str]]:
    """Each non-loop edge oriented from its lexicographically smaller orbit."""
    return {e.id: tuple(sorted((e.u, e.v))) for e in q.non_loop_edges()}


def orbit_matrix_anti(f: SymmetricFramework, orientation: Mapping[str, tuple[str, str]] | None = None) -> RationalMatrix:
    """Anti-symmetric orbit matrix ``O2`` (rows = non-loop edge orbits).

    For ``[e]`` oriented from ``[v]`` to ``[w]`` with gain ``g`` the row is
    ``phi`` in ``[v]`` and ``-g * phi o tau(g)`` in ``[w]``, where ``phi`` is
    the functional of the bar ``v~ (g w~)``.
    """
    colour_edges(f)
    q = f.quotient
    non_loops = q.non_loop_edges()
    if orientation is None:
        orientation = default_orientation(q)
    if set(orientation) != {e.id for e in non_loops}:
        raise RigidityError("orientation must cover exactly the non-loop edges")
    idx = {o: 2 * i for i, o in enumerate(q.orbits)}
    rows = []
    for e in non_loops:
        tail, head = orientation[e.id]
        if {tail, head} != {e.u, e.v}:
            raise RigidityError(f"orientation of {e.id!r} does not match its ends")
        # the bar tail~ -- (g head~) has functional phi
        if tail == e.u:
            diff = sub(f.reps[e.u], f.image_position(e.v, e.gain))
        else:
            diff = sub(f.reps[e.v], f.image_position(e.u, e.gain))
        phi = edge_functional(f.norm, diff)
        psi = _compose_tau(f.norm, phi, e.gain)
        r = [ZERO] * (2 * len(q.orbits))
        r[idx[tail]] += phi[0]
        r[idx[tail] + 1] += phi[1]
        r[idx[head]] -= e.gain * psi[0]
        r[idx[head] + 1] -= e.gain * psi[1]
        rows.append(r)
    return RationalMatrix(rows, 2 * len(q.orbits), [e.id for e in non_loops], _orbit_cols(q))


@dataclass(frozen=True)
class FlexBasis:
    vectors: tuple[tuple[Fraction, ...], ...]
    kind: str
    dims: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.vectors)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "dims": dict(self.dims),
            "vectors": [[fraction_str(x) for x in v] for v in self.vectors],
        }


def flex_space(m: RationalMatrix, kind: str = "full") -> FlexBasis:
    basis = tuple(m.nullspace())
    return FlexBasis(basis, kind, {"dim_F": len(basis)})


def trivial_flex_dims(f: SymmetricFramework) -> dict[str, int]:
    """Dimensions of trivial, symmetric trivial and anti-symmetric trivial flexes.

    With a quadrilateral ball the isometry group is finite, so the trivial
    flexes are the translations; the symmetric ones are the translations
    fixed by the reflection and the anti-symmetric ones those it negates.
    """
    T = f.norm.reflection.matrix
    plus = [[T[i][j] + (1 if i == j else 0) for j in range(2)] for i in range(2)]
    minus = [[(1 if i == j else 0) - T[i][j] for j in range(2)] for i in range(2)]
    return {"dimT": 2, "dimT1": _rank(plus, 2), "dimT2": _rank(minus, 2)}


def trivial_flexes(f: SymmetricFramework) -> dict[str, list[tuple[Fraction, ...]]]:
    """Spanning translations in user coordinates for T, T1 and T2."""
    norm = f.norm
    along = norm.denormalize((Fraction(0), Fraction(1)))  # mirror direction
    across = norm.denormalize((Fraction(1), Fraction(0)))
    n = len(f.quotient.orbits)

    def full(x):
        return tuple(c for _ in range(2 * n) for c in x)

    return {
        "T": [full(along), full(across)],
        "T1": [tuple(c for _ in range(n) for c in along)],
        "T2": [tuple(c for _ in range(n) for c in across)],
    }


def decompose_flex(f: SymmetricFramework, u: Sequence) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Split ``u`` into ``a + b`` with ``a`` symmetric and ``b`` anti-symmetric."""
    verts = _vertex_order(f)
    if len(u) != 2 * len(verts):
        raise RigidityError(f"flex of length {len(u)}; expected {2 * len(verts)}")
    u = [Fraction(x) for x in u]
    pos = {v: 2 * i for i, v in enumerate(verts)}
    T = f.norm.reflection
    a, b = [], []
    for v in verts:
        o, s = v
        uv = (u[pos[v]], u[pos[v] + 1])
        w = (o, -s)
        tw = T.apply((u[pos[w]], u[pos[w] + 1]))
        a += [(uv[0] + tw[0]) / 2, (uv[1] + tw[1]) / 2]
        b += [(uv[0] - tw[0]) / 2, (uv[1] - tw[1]) / 2]
    return tuple(a), tuple(b)


def lift_flex(f: SymmetricFramework, orbit_vector: Sequence, kind: str = "sym") -> tuple[Fraction, ...]:
    """Lift an orbit-level vector to the covering framework.

    ``sym``: ``u_v = tau(g_v) x_[v]``; ``anti``: ``u_v = g_v tau(g_v) x_[v]``,
    with ``g_v = +1`` on representatives and ``-1`` on their images.
    """
    q = f.quotient
    if len(orbit_vector) != 2 * len(q.orbits):
        raise RigidityError(f"orbit vector of length {len(orbit_vector)}; expected {2 * len(q.orbits)}")
    if kind not in ("sym", "anti"):
        raise RigidityError(f"unknown lift kind {kind!r}")
    x = [Fraction(c) for c in orbit_vector]
    out = []
    for i, o in enumerate(q.orbits):
        xo = (x[2 * i], x[2 * i + 1])
        for g in (1, -1):
            y = tau(f.norm, g, xo)
            if kind == "anti" and g == -1:
                y = (-y[0], -y[1])
            out += list(y)
    return tuple(out)


def is_symmetric_vector(f: SymmetricFramework, u: Sequence) -> bool:
    return all(c == 0 for c in decompose_flex(f, u)[1])


def is_antisymmetric_vector(f: SymmetricFramework, u: Sequence) -> bool:
    return all(c == 0 for c in decompose_flex(f, u)[0])


@dataclass(frozen=True)
class RigidityReport:
    well_positioned: bool
    counts: dict
    ranks: dict
    nullities: dict
    inf_rigid: bool
    isostatic: bool
    sym_rigid: bool
    sym_isostatic: bool
    anti_rigid: bool
    anti_isostatic: bool
    trivial_dims: dict

    def to_json(self) -> dict:
        return {
            "well_positioned": self.well_positioned,
            "counts": dict(self.counts),
            "ranks": dict(self.ranks),
            "nullities": dict(self.nullities),
            "trivial_dims": dict(self.trivial_dims),
            "predicates": {
                "inf_rigid": self.inf_rigid,
                "isostatic": self.isostatic,
                "sym_rigid": self.sym_rigid,
                "sym_isostatic": self.sym_isostatic,
                "anti_rigid": self.anti_rigid,
                "anti_isostatic": self.anti_isostatic,
            },
        }


def rigidity_report(f: SymmetricFramework) -> RigidityReport:
    """Rank-based rigidity predicates; raises :class:`IllPositioned` if needed.

    Isostatic means rigid with independent rows, which for a linear map is
    the same as no proper spanning subframework being rigid.
    """
    colour_edges(f)
    q = f.quotient
    df = rigidity_matrix(f)
    o1 = orbit_matrix_sym(f)
    o2 = orbit_matrix_anti(f)
    r_df, r1, r2 = df.rank(), o1.rank(), o2.rank()
    n_df, n1, n2 = df.ncols - r_df, o1.ncols - r1, o2.ncols - r2
    dims = trivial_flex_dims(f)
    n_fixed = len(q.loops())
    counts = {
        "V0": len(q.orbits),
        "E0": len(q.edges),
        "E0_nonloop": len(q.edges) - n_fixed,
        "fixed_edges": n_fixed,
        "V": 2 * len(q.orbits),
        "E": df.nrows,
    }
    inf_rigid = n_df == dims["dimT"]
    sym_rigid = n1 == dims["dimT1"]
    anti_rigid = n2 == dims["dimT2"]
    return RigidityReport(
        well_positioned=True,
        counts=counts,
        ranks={"df": r_df, "O1": r1, "O2": r2},
        nullities={"df": n_df, "O1": n1, "O2": n2},
        inf_rigid=inf_rigid,
        isostatic=inf_rigid and r_df == df.nrows,
        sym_rigid=sym_rigid,
        sym_isostatic=sym_rigid and r1 == o1.nrows,
        anti_rigid=anti_rigid,
        anti_isostatic=anti_rigid and r2 == o2.nrows and n_fixed == 0,
        trivial_dims=dims,
    )


def flex_bases(f: SymmetricFramework, lifted: bool = False) -> dict[str, FlexBasis]:
    """Kernel bases of ``df``, ``O1`` and ``O2``; optionally the lifted ones."""
    df, o1, o2 = rigidity_matrix(f), orbit_matrix_sym(f), orbit_matrix_anti(f)
    dims = trivial_flex_dims(f)
    full = flex_space(df, "full")
    sym = flex_space(o1, "symmetric-orbit")
    anti = flex_space(o2, "anti-symmetric-orbit")
    d = {"dim_F": len(full), "dim_F1": len(sym), "dim_F2": len(anti), "dim_T": dims["dimT"], "dim_T1": dims["dimT1"], "dim_T2": dims["dimT2"]}
    out = {
        "full": FlexBasis(full.vectors, "full", d),
        "sym": FlexBasis(sym.vectors, "symmetric-orbit", d),
        "anti": FlexBasis(anti.vectors, "anti-symmetric-orbit", d),
    }
    if lifted:
        out["sym_lifted"] = FlexBasis(tuple(lift_flex(f, v, "sym") for v in sym.vectors), "full", d)
        out["anti_lifted"] = FlexBasis(tuple(lift_flex(f, v, "anti") for v in anti.vectors), "full", d)
    return out
