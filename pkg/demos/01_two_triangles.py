"""Two triangles glued along a doubled edge, analysed in two positions."""

from fractions import Fraction as F

from gridrig import LINF, SignedQuotientGraph, SymmetricFramework, characterize, rigidity_report

# three orbits; parallel edges carry opposite gains
q = SignedQuotientGraph.from_triples(
    "abc", [("a", "b", 1), ("a", "b", -1), ("c", "b", 1), ("c", "b", -1), ("c", "a", 1)]
)

# mirror is the vertical axis in normalized coordinates
positions = {
    "tall": {"a": (-2, 0), "b": (-1, F(1, 2)), "c": (F(-3, 2), F(3, 2))},
    "flat": {"a": (F(-1, 2), 0), "b": (F(-1, 2), F(3, 2)), "c": (F(-3, 2), 0)},
}

for name, reps in positions.items():
    f = SymmetricFramework.from_normalized(q, reps, LINF)
    rep = rigidity_report(f)
    ch = characterize(f)
    print(name)
    print("  ranks     ", rep.ranks)
    print("  nullities ", rep.nullities)
    print("  colours   ", dict(ch.decomposition.colour))
    print("  sym / anti / rigid:", rep.sym_isostatic, rep.anti_isostatic, rep.inf_rigid)

# five edges on three orbits: never enough for full rigidity
print("edges", len(q.edges), "< 2 * orbits", 2 * len(q.orbits))
