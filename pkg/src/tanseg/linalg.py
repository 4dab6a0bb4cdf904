"""Exact linear algebra over Q: determinants and fraction-free rank."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Hashable, Iterable, Mapping, Sequence


def det(rows: Sequence[Sequence]) -> Fraction:
    """Determinant by Gaussian elimination with exact Fractions."""
    m = [[Fraction(x) for x in row] for row in rows]
    k = len(m)
    if any(len(row) != k for row in m):
        raise ValueError("matrix is not square")
    result = Fraction(1)
    for c in range(k):
        piv = next((r for r in range(c, k) if m[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        p = m[c][c]
        result *= p
        for r in range(c + 1, k):
            f = m[r][c]
            if f:
                f /= p
                row_c, row_r = m[c], m[r]
                for j in range(c + 1, k):
                    row_r[j] -= f * row_c[j]
    return result


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Integer determinant with Bareiss' fraction-free elimination."""
    m = [list(row) for row in rows]
    k = len(m)
    if k == 0:
        return 1
    sign = 1
    prev = 1
    for c in range(k - 1):
        if m[c][c] == 0:
            piv = next((r for r in range(c + 1, k) if m[r][c]), None)
            if piv is None:
                return 0
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        p = m[c][c]
        row_c = m[c]
        for r in range(c + 1, k):
            row_r = m[r]
            f = row_r[c]
            for j in range(c + 1, k):
                row_r[j] = (p * row_r[j] - f * row_c[j]) // prev
        prev = p
    return sign * m[k - 1][k - 1]


def _integer_row(row: Mapping[Hashable, object]) -> dict:
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    out = {}
    for k, v in row.items():
        if v:
            v = Fraction(v) * den
            out[k] = v.numerator
    return _primitive(out)


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {k: v // g for k, v in row.items()}
    return row


class Echelon:
    """Incremental fraction-free row echelon form over Q.

    Rows are sparse mappings column -> rational.  Columns must be mutually
    comparable; the pivot of a row is its largest column.
    """

    def __init__(self):
        self.pivots: dict = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Mapping) -> dict:
        r = _integer_row(row)
        while r:
            lead = max(r)
            prow = self.pivots.get(lead)
            if prow is None:
                return r
            a, b = prow[lead], r[lead]
            g = gcd(a, b)
            fa, fb = a // g, b // g
            new = {k: fa * v for k, v in r.items()}
            for k, v in prow.items():
                x = new.get(k, 0) - fb * v
                if x:
                    new[k] = x
                else:
                    new.pop(k, None)
            r = _primitive(new)
        return r

    def add(self, row: Mapping) -> bool:
        """Insert ``row``; return True when it was independent of the rows so far."""
        r = self.reduce(row)
        if not r:
            return False
        self.pivots[max(r)] = r
        return True


def rank(rows: Iterable[Mapping]) -> int:
    ech = Echelon()
    for row in rows:
        ech.add(row)
    return ech.rank


def dense_rank(matrix: Sequence[Sequence]) -> int:
    return rank({j: x for j, x in enumerate(row) if x} for row in matrix)
