"""Hand-transcribed reference polynomials for four factors.

These are literal transcriptions used as golden values: the wedge quadric,
the three S_{2,1}^4 highest weight cubics with their published constants,
and the published pullbacks to symmetric-matrix entries.  Generated module
elements are compared against them exactly or up to a recorded scalar.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .poly import PolyError, SparsePoly, from_string_terms

_TERM = re.compile(r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*\*?\s*((?:[A-Za-z0-9_]+(?:\^\d+)?\s*\*?\s*)*)")
_FACTOR = re.compile(r"([A-Za-z0-9_]+?)(?:\^(\d+))?(?:\*|\s|$)")


def parse_poly(varset: str, n: int, text: str) -> SparsePoly:
    """Parse ``"2 X0000 X1100 - X0100*X1000"`` or ``"a_1_2^2 a_3_4^2 - t"``.

    X-variables are written ``X`` followed by the binary index.
    """
    terms = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise PolyError(f"cannot parse polynomial near {text[pos:pos + 20]!r}")
        sign, coef, body = m.groups()
        c = Fraction(coef) if coef else Fraction(1)
        if sign == "-":
            c = -c
        names: list[str] = []
        for name, exp in _FACTOR.findall(body.strip() + " "):
            if varset == "X":
                if not name.startswith("X"):
                    raise PolyError(f"expected an X-variable, got {name!r}")
                name = name[1:]
            names.extend([name] * int(exp or 1))
        terms.append((c, names))
        pos = m.end()
    return from_string_terms(varset, n, terms)


def _x(text: str) -> SparsePoly:
    return parse_poly("X", 4, text)


def _a(text: str) -> SparsePoly:
    return parse_poly("A", 4, text)


def wedge_quadric_display() -> SparsePoly:
    return _x(
        "X0000 X1111 - X0001 X1110 - X0010 X1101 + X0011 X1100"
        " - X0100 X1011 + X0101 X1010 + X0110 X1001 - X0111 X1000"
    )


def cubic_one_display() -> SparsePoly:
    """The first cubic exactly as published: twice X^{0000} times the wedge quadric."""
    return _x("2 X0000") * wedge_quadric_display()


def cubic_two_display() -> SparsePoly:
    return (
        _x("2 X0000 X1100 - 2 X0100 X1000") * _x("X0011")
        + _x("- X1100 X0001 + X0101 X1000 + X0100 X1001 - X1101 X0000") * _x("X0010")
        + _x("- X0010 X1100 + X1000 X0110 + X1010 X0100 - X1110 X0000") * _x("X0001")
        + _x("X0011 X1100 - X0111 X1000 - X0100 X1011 + X0000 X1111") * _x("X0000")
    )


def cubic_three_display() -> SparsePoly:
    return (
        _x("2 X0000 X0101 - 2 X0001 X0100") * _x("X1010")
        + _x("- X0101 X0010 + X0100 X0011 + X0110 X0001 - X0111 X0000") * _x("X1000")
        + _x("- X0101 X1000 + X0100 X1001 + X1100 X0001 - X1101 X0000") * _x("X0010")
        + _x("X0101 X1010 - X0100 X1011 - X0001 X1110 + X0000 X1111") * _x("X0000")
    )


def cubic_displays() -> list[SparsePoly]:
    return [cubic_one_display(), cubic_two_display(), cubic_three_display()]


def wedge_pullback_display() -> SparsePoly:
    """Published pullback of the wedge quadric, t^4 times a quartic in the off-diagonal entries."""
    return _a("t^4") * _a(
        "a_1_4^2 a_2_3^2 + a_1_3^2 a_2_4^2 + a_1_2^2 a_3_4^2"
        " - a_1_2 a_2_3 a_3_4 a_1_4 - a_1_2 a_2_4 a_1_3 a_3_4 - a_1_3 a_2_4 a_2_3 a_1_4"
    )


def cubic_pullback_displays() -> list[SparsePoly]:
    """Published pullbacks of the three cubics at t = 1."""
    one = _a(
        "4 a_1_2^2 a_3_4^2 - 4 a_1_2 a_1_3 a_2_4 a_3_4 - 4 a_1_2 a_1_4 a_2_3 a_3_4"
        " + 4 a_1_3^2 a_2_4^2 - 4 a_1_3 a_1_4 a_2_3 a_2_4 + 4 a_1_4^2 a_2_3^2"
    )
    two = _a(
        "4 a_1_2^2 a_3_4^2 - 2 a_1_2 a_1_3 a_2_4 a_3_4 - 2 a_1_2 a_1_4 a_2_3 a_3_4"
        " + a_1_3^2 a_2_4^2 - 2 a_1_3 a_1_4 a_2_3 a_2_4 + a_1_4^2 a_2_3^2"
    )
    three = _a(
        "a_1_2^2 a_3_4^2 - 2 a_1_2 a_1_3 a_2_4 a_3_4 - 2 a_1_2 a_1_4 a_2_3 a_3_4"
        " + 4 a_1_3^2 a_2_4^2 - 2 a_1_3 a_1_4 a_2_3 a_2_4 + a_1_4^2 a_2_3^2"
    )
    return [one, two, three]


def binomial_generators() -> list[SparsePoly]:
    """The two exclusive 2x2 minors a13 a24 - a14 a23 and a12 a34 - a14 a23."""
    return [_a("a_1_3 a_2_4 - a_1_4 a_2_3"), _a("a_1_2 a_3_4 - a_1_4 a_2_3")]
