"""Quadrilateral norms on the plane, the induced reflection, and edge colours.

A quadrilateral norm is given by two linearly independent facet functionals
``F1``, ``F2`` via ``||x|| = max(|F1.x|, |F2.x|)``.  The normalising map
``N(x) = (F1.x, F2.x)`` is a linear isometry onto the max-norm plane, and
every computation here happens in those normalised coordinates: there the
reflection is ``(u1, u2) -> (-u1, u2)`` (mirror ``ker F1`` along ``ker F2``)
and an edge is coloured ``F1`` when ``|u1| > |u2|`` for its difference
vector ``u``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .quotient import CoveringGraph, GainEdge, SignedQuotientGraph, build_covering, covering_edge_pair

F1 = "F1"
F2 = "F2"

Vec = tuple[Fraction, Fraction]


class GeometryError(ValueError):
    pass


class IllPositioned(GeometryError):
    """Some bar directions lie on a cone boundary of the unit ball."""

    def __init__(self, edges: Sequence[str]):
        self.edges = tuple(edges)
        super().__init__(f"framework is not well-positioned; boundary edges: {list(self.edges)}")


def parse_fraction(s) -> Fraction:
    if isinstance(s, Fraction):
        return s
    if isinstance(s, float):
        raise GeometryError("floats are not accepted; pass a string like '3/2'")
    return Fraction(s)


def vec(x, y) -> Vec:
    return (parse_fraction(x), parse_fraction(y))


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return a[0] * b[0] + a[1] * b[1]


def sub(a: Vec, b: Vec) -> Vec:
    return (a[0] - b[0], a[1] - b[1])


def add(a: Vec, b: Vec) -> Vec:
    return (a[0] + b[0], a[1] + b[1])


def scale(c, a: Vec) -> Vec:
    return (c * a[0], c * a[1])


@dataclass(frozen=True)
class QuadNorm:
    F1hat: Vec
    F2hat: Vec

    def __post_init__(self):
        object.__setattr__(self, "F1hat", vec(*self.F1hat))
        object.__setattr__(self, "F2hat", vec(*self.F2hat))
        if self.det == 0:
            raise GeometryError("facet functionals are linearly dependent")

    @property
    def det(self) -> Fraction:
        a, b = self.F1hat
        c, d = self.F2hat
        return a * d - b * c

    def phi(self, j: int | str, x: Vec) -> Fraction:
        return dot(self.facet(j), x)

    def facet(self, j: int | str) -> Vec:
        return self.F1hat if j in (1, F1) else self.F2hat

    def norm(self, x: Vec) -> Fraction:
        return max(abs(dot(self.F1hat, x)), abs(dot(self.F2hat, x)))

    def normalize(self, x: Vec) -> Vec:
        """The isometry onto max-norm coordinates."""
        return (dot(self.F1hat, x), dot(self.F2hat, x))

    def denormalize(self, u: Vec) -> Vec:
        a, b = self.F1hat
        c, d = self.F2hat
        det = self.det
        return ((d * u[0] - b * u[1]) / det, (-c * u[0] + a * u[1]) / det)

    @property
    def reflection(self) -> "Reflection":
        """``T = N^-1 diag(-1, 1) N``."""
        a, b = self.F1hat
        c, d = self.F2hat
        det = self.det
        # N = [[a, b], [c, d]];  N^-1 = [[d, -b], [-c, a]] / det
        m = (
            ((-d * a - b * c) / det, (-d * b - b * d) / det),
            ((c * a + a * c) / det, (c * b + a * d) / det),
        )
        return Reflection(m)

    def reflect(self, x: Vec) -> Vec:
        return self.reflection.apply(x)

    def to_json(self) -> dict:
        from .linalg import fraction_str

        return {"F1": [fraction_str(x) for x in self.F1hat], "F2": [fraction_str(x) for x in self.F2hat]}

    @classmethod
    def from_json(cls, doc: Mapping) -> "QuadNorm":
        return cls(vec(*doc["F1"]), vec(*doc["F2"]))


@dataclass(frozen=True)
class Reflection:
    matrix: tuple[Vec, Vec]

    def apply(self, x: Vec) -> Vec:
        (a, b), (c, d) = self.matrix
        return (a * x[0] + b * x[1], c * x[0] + d * x[1])

    def power(self, g: int) -> "Reflection":
        """``tau(g)`` for ``g`` in ``{+1, -1}``."""
        return self if g == -1 else Reflection(((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))))

    def is_involution(self) -> bool:
        (a, b), (c, d) = self.matrix
        return (a * a + b * c, a * b + b * d, c * a + d * c, c * b + d * d) == (1, 0, 0, 1)


def make_norm(F1hat, F2hat) -> QuadNorm:
    return QuadNorm(vec(*F1hat), vec(*F2hat))


LINF = make_norm((0, 1), (1, 0))
L1 = make_norm((1, 1), (1, -1))
PRESETS = {"linf": LINF, "l1": L1}


def tau(norm: QuadNorm, g: int, x: Vec) -> Vec:
    return x if g == 1 else norm.reflect(x)


def edge_colour(norm: QuadNorm, diff: Vec) -> str | None:
    """``F1``/``F2`` for a bar direction, ``None`` on a cone boundary."""
    u1, u2 = norm.normalize(diff)
    a, b = abs(u1), abs(u2)
    if a > b:
        return F1
    if b > a:
        return F2
    return None


def edge_functional(norm: QuadNorm, diff: Vec) -> Vec:
    """Gradient of the norm at ``diff``: ``s * Fj`` with ``s = sign(Fj.diff)``."""
    c = edge_colour(norm, diff)
    if c is None:
        raise IllPositioned([])
    f = norm.facet(c)
    s = 1 if dot(f, diff) > 0 else -1
    return (s * f[0], s * f[1])


@dataclass(frozen=True)
class Framework:
    """A plain bar-joint framework: labelled edges and a placement."""

    edges: tuple[tuple[Hashable, Hashable], ...]
    placement: Mapping[Hashable, Vec]
    norm: QuadNorm
    vertices: tuple[Hashable, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "placement", {k: vec(*v) for k, v in self.placement.items()})
        if not self.vertices:
            object.__setattr__(self, "vertices", tuple(self.placement))
        for v, w in self.edges:
            if self.placement[v] == self.placement[w]:
                raise GeometryError(f"edge {v!r}{w!r} has coincident endpoints")

    def colours(self) -> list[str]:
        out = []
        bad = []
        for i, (v, w) in enumerate(self.edges):
            c = edge_colour(self.norm, sub(self.placement[v], self.placement[w]))
            if c is None:
                bad.append(f"{v}-{w}")
            out.append(c)
        if bad:
            raise IllPositioned(bad)
        return out


@dataclass(frozen=True)
class MonochromeDecomposition:
    colour: dict[str, str]
    quotient_subgraphs: dict[str, tuple[str, ...]]

    def edges_of(self, c: str) -> tuple[str, ...]:
        return self.quotient_subgraphs[c]


@dataclass(frozen=True)
class SymmetricFramework:
    """A Z2-symmetric framework stored by orbit representatives.

    ``reps`` places the representative ``(orbit, +1)`` of each orbit; the
    image ``(orbit, -1)`` sits at the reflected point.
    """

    quotient: SignedQuotientGraph
    reps: Mapping[str, Vec]
    norm: QuadNorm
    covering: CoveringGraph = field(init=False, compare=False, repr=False)
    placement: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        reps = {o: vec(*p) for o, p in self.reps.items()}
        missing = set(self.quotient.orbits) - set(reps)
        if missing:
            raise GeometryError(f"no placement for orbits {sorted(missing)}")
        extra = set(reps) - set(self.quotient.orbits)
        if extra:
            raise GeometryError(f"placement for unknown orbits {sorted(extra)}")
        object.__setattr__(self, "reps", {o: reps[o] for o in self.quotient.orbits})
        object.__setattr__(self, "covering", build_covering(self.quotient))
        pl = {}
        for o, p in self.reps.items():
            pl[(o, 1)] = p
            pl[(o, -1)] = self.norm.reflect(p)
        object.__setattr__(self, "placement", pl)

    @property
    def reflection(self) -> Reflection:
        return self.norm.reflection

    def position(self, v) -> Vec:
        return self.placement[v]

    def image_position(self, orbit: str, g: int) -> Vec:
        """Position of ``g * rep(orbit)``."""
        return tau(self.norm, g, self.reps[orbit])

    def edge_diff(self, e: GainEdge) -> Vec:
        """``p_u~ - p_{g v~}`` for the covering edge at the representative."""
        if e.is_loop:
            return sub(self.reps[e.u], self.norm.reflect(self.reps[e.u]))
        return sub(self.reps[e.u], self.image_position(e.v, e.gain))

    def covering_edges(self) -> list[tuple[str, tuple, tuple]]:
        out = []
        for e in self.quotient.edges:
            for i, (v, w) in enumerate(covering_edge_pair(e)):
                out.append((e.id if i == 0 else "-" + e.id, v, w))
        return out

    def normalized_reps(self) -> dict[str, Vec]:
        return {o: self.norm.normalize(p) for o, p in self.reps.items()}

    def with_reps(self, reps: Mapping[str, Vec]) -> "SymmetricFramework":
        return SymmetricFramework(self.quotient, reps, self.norm)

    def to_json(self) -> dict:
        from .linalg import fraction_str

        return {
            "norm": self.norm.to_json(),
            "quotient": self.quotient.to_json(),
            "reps": {o: [fraction_str(x) for x in p] for o, p in self.reps.items()},
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "SymmetricFramework":
        norm = QuadNorm.from_json(doc["norm"])
        q = SignedQuotientGraph.from_json(doc["quotient"])
        reps = {str(k): vec(*v) for k, v in doc["reps"].items()}
        return cls(q, reps, norm)

    @classmethod
    def from_normalized(cls, quotient: SignedQuotientGraph, normalized_reps: Mapping[str, Vec], norm: QuadNorm) -> "SymmetricFramework":
        return cls(quotient, {o: norm.denormalize(vec(*u)) for o, u in normalized_reps.items()}, norm)


def colour_edges(f: SymmetricFramework) -> MonochromeDecomposition:
    """Colour each edge orbit by the cone containing its bar direction.

    Raises :class:`IllPositioned` listing every edge orbit on a cone boundary.
    """
    colour = {}
    bad = []
    for e in f.quotient.edges:
        c = edge_colour(f.norm, f.edge_diff(e))
        if c is None:
            bad.append(e.id)
        colour[e.id] = c
    if bad:
        raise IllPositioned(bad)
    subs = {F1: tuple(k for k, c in colour.items() if c == F1), F2: tuple(k for k, c in colour.items() if c == F2)}
    return MonochromeDecomposition(colour, subs)


def is_well_positioned(f: SymmetricFramework) -> bool:
    try:
        colour_edges(f)
    except IllPositioned:
        return False
    return True


@dataclass(frozen=True)
class SymmetryDiagnostics:
    valid: bool
    asymmetric_vertices: tuple = ()
    coincident_edges: tuple = ()
    mirror_vertices: tuple = ()

    def __bool__(self) -> bool:
        return self.valid


def validate_symmetric(
    f: SymmetricFramework | None = None,
    *,
    covering: CoveringGraph | None = None,
    placement: Mapping | None = None,
    norm: QuadNorm | None = None,
) -> SymmetryDiagnostics:
    """Check ``p_{-v} = T p_v``, distinct bar endpoints, and flag mirror joints.

    Accepts a :class:`SymmetricFramework` (symmetric by construction) or an
    explicit covering graph with a full placement.
    """
    if f is not None:
        covering, placement, norm = f.covering, f.placement, f.norm
    if covering is None or placement is None or norm is None:
        raise GeometryError("need a framework or covering + placement + norm")
    placement = {k: vec(*v) for k, v in placement.items()}
    T = norm.reflection
    asym = tuple(v for v in covering.vertices if placement[covering.neg(v)] != T.apply(placement[v]))
    coinc = tuple((v, w) for v, w in covering.edges if placement[v] == placement[w])
    mirror = tuple(v for v in covering.vertices if T.apply(placement[v]) == placement[v])
    return SymmetryDiagnostics(not asym and not coinc, asym, coinc, mirror)
