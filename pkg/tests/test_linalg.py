from fractions import Fraction

import sympy
from hypothesis import given
from hypothesis import strategies as st

from gridrig.linalg import RationalMatrix, fraction_str, nullspace, rank, rref, span_rank

entries = st.fractions(min_value=-4, max_value=4, max_denominator=3)


@st.composite
def matrices(draw):
    r = draw(st.integers(0, 6))
    c = draw(st.integers(1, 6))
    # sparse-ish rows so that rank deficiency is common
    cell = st.one_of(st.just(Fraction(0)), st.just(Fraction(0)), entries)
    return [[draw(cell) for _ in range(c)] for _ in range(r)], c


def test_small_ranks():
    assert rank([], 3) == 0
    assert rank([[1, 0], [0, 1]], 2) == 2
    assert rank([[1, 2], [2, 4]], 2) == 1
    assert rank([[0, 0, 0]], 3) == 0


@given(matrices())
def test_rank_matches_sympy(m):
    rows, c = m
    expected = sympy.Matrix(len(rows), c, [sympy.Rational(x.numerator, x.denominator) for r in rows for x in r]).rank() if rows else 0
    assert rank(rows, c) == expected
    assert len(rref(rows, c)[0]) == expected


@given(matrices())
def test_nullspace_is_kernel_basis(m):
    rows, c = m
    M = RationalMatrix(rows, c)
    basis = M.nullspace()
    assert len(basis) == c - M.rank()
    for v in basis:
        assert all(x == 0 for x in M.apply(v))
    assert span_rank(basis, c) == len(basis)


def test_rref_pivots():
    rows, piv = rref([[2, 4, 0], [1, 2, 1]], 3)
    assert piv == [0, 2]
    assert rows[0] == [1, 2, 0]


def test_fraction_str():
    assert fraction_str(Fraction(3, 2)) == "3/2"
    assert fraction_str(Fraction(-4, 2)) == "-2"


def test_matrix_is_immutable_value():
    a = RationalMatrix([[1, 2]], 2)
    b = RationalMatrix([[Fraction(1), Fraction(2)]], 2)
    assert a == b and hash(a) == hash(b)
