"""Split a motion of a flexible framework into mirror-even and mirror-odd parts."""

from fractions import Fraction as F

from gridrig import L1, SignedQuotientGraph, SymmetricFramework, decompose_flex, flex_bases, rigidity_matrix
from gridrig.rigidity import is_antisymmetric_vector, is_symmetric_vector

# a path of two orbits plus a fixed bar: one edge short of isostatic
q = SignedQuotientGraph.from_triples("ab", [("a", "a", -1), ("a", "b", 1)])
f = SymmetricFramework.from_normalized(q, {"a": (-1, F(1, 3)), "b": (-3, F(1, 2))}, L1)

bases = flex_bases(f, lifted=True)
print({k: len(v) for k, v in bases.items()})

df = rigidity_matrix(f)
for u in bases["full"].vectors:
    even, odd = decompose_flex(f, u)
    print("flex   ", [str(x) for x in u])
    print("  even ", [str(x) for x in even], is_symmetric_vector(f, even), not any(df.apply(even)))
    print("  odd  ", [str(x) for x in odd], is_antisymmetric_vector(f, odd), not any(df.apply(odd)))
