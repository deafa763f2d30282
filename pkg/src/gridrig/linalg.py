"""Exact rational matrices: rank, nullspace and products over ``Fraction``."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Hashable, Sequence


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class RationalMatrix:
    """A dense matrix of ``Fraction`` entries with optional row/column labels.

    Instances are treated as immutable; every operation returns new data.
    """

    __slots__ = ("rows", "ncols", "row_labels", "col_labels")

    def __init__(
        self,
        rows: Sequence[Sequence],
        ncols: int | None = None,
        row_labels: Sequence[Hashable] | None = None,
        col_labels: Sequence[Hashable] | None = None,
    ):
        self.rows = tuple(tuple(_frac(x) for x in r) for r in rows)
        if ncols is None:
            if not self.rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(self.rows[0])
        self.ncols = ncols
        for r in self.rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        self.row_labels = tuple(row_labels) if row_labels is not None else tuple(range(len(self.rows)))
        self.col_labels = tuple(col_labels) if col_labels is not None else tuple(range(ncols))
        if len(self.row_labels) != len(self.rows) or len(self.col_labels) != ncols:
            raise ValueError("label count does not match matrix shape")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __repr__(self) -> str:
        return f"RationalMatrix({self.nrows}x{self.ncols})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.ncols == other.ncols and self.rows == other.rows

    def __hash__(self):
        return hash((self.ncols, self.rows))

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.rows[i]

    def apply(self, vec: Sequence) -> tuple[Fraction, ...]:
        if len(vec) != self.ncols:
            raise ValueError(f"vector of length {len(vec)} for {self.ncols} columns")
        v = [_frac(x) for x in vec]
        return tuple(sum((a * b for a, b in zip(r, v) if a), Fraction(0)) for r in self.rows)

    def rank(self) -> int:
        return rank(self.rows, self.ncols)

    def nullity(self) -> int:
        return self.ncols - self.rank()

    def nullspace(self) -> list[tuple[Fraction, ...]]:
        return nullspace(self.rows, self.ncols)

    def to_strings(self) -> list[list[str]]:
        return [[fraction_str(x) for x in r] for r in self.rows]


def fraction_str(x: Fraction) -> str:
    x = _frac(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _integer_rows(rows) -> list[list[int]]:
    out = []
    for r in rows:
        d = lcm(*(x.denominator for x in r)) if r else 1
        out.append([int(x * d) for x in r])
    return out


def rank(rows: Sequence[Sequence[Fraction]], ncols: int) -> int:
    """Rank by fraction-free (Bareiss) elimination on integer-scaled rows.

    Pivots are taken column by column, choosing the first usable row, so the
    elimination order is fully determined by the input.
    """
    m = _integer_rows(rows)
    nrows = len(m)
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, nrows):
            a = m[i][c]
            row_i = m[i]
            row_r = m[r]
            for j in range(c + 1, ncols):
                # exact division is guaranteed by Sylvester's identity
                row_i[j] = (p * row_i[j] - a * row_r[j]) // prev
            row_i[c] = 0
        prev = p
        r += 1
    return r


def rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    m = [[_frac(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        if p != 1:
            m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel, one vector per free column (ascending)."""
    red, pivots = rref(rows, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[free]
        basis.append(tuple(v))
    return basis


def span_rank(vectors: Sequence[Sequence[Fraction]], dim: int) -> int:
    return rank([list(v) for v in vectors], dim)
