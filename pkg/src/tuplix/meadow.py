"""Exact rational arithmetic with a total multiplicative inverse.

Division never fails here: the inverse of zero is zero. That single
convention makes every operation total, so terms built on top of these
numbers can always be evaluated. The quotient x/x then acts as a zero
test: it is 0 when x is 0 and 1 otherwise.
"""

from __future__ import annotations

import re
from fractions import Fraction

# Canonical representation: stdlib Fraction already stores lowest terms
# with a positive denominator, so equality is plain structural equality.
Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

_RATIONAL_RE = re.compile(r"([+-]?)(\d+)(?:/(\d+)|\.(\d+))?\Z")


def make_rational(num: int, den: int = 1) -> Rational:
    """Build a rational in lowest terms. A zero denominator is an error."""
    if den == 0:
        raise ValueError("zero denominator in rational constant")
    return Fraction(num, den)


def add(x: Rational, y: Rational) -> Rational:
    return x + y


def sub(x: Rational, y: Rational) -> Rational:
    return x - y


def mul(x: Rational, y: Rational) -> Rational:
    return x * y


def neg(x: Rational) -> Rational:
    return -x


def minv(x: Rational) -> Rational:
    """Multiplicative inverse, totalized: minv(0) is 0."""
    if x == 0:
        return ZERO
    return 1 / x


def div(x: Rational, y: Rational) -> Rational:
    """Total division x * minv(y); anything divided by zero is zero."""
    return x * minv(y)


def indicator(x: Rational) -> Rational:
    """x/x under total division: 0 if x is 0, else 1."""
    return ZERO if x == 0 else ONE


def abs_val(x: Rational) -> Rational:
    return abs(x)


def leq_encode(p: Rational, q: Rational) -> Rational:
    """Encode p <= q as a number that is zero exactly when it holds.

    |q - p| - (q - p) is 0 when q >= p and 2*(p - q) > 0 otherwise.
    """
    d = q - p
    return abs(d) - d


def parse_rational(text: str) -> Rational:
    """Parse 'n', 'n/d' or an exact decimal, with an optional sign.

    The denominator must be nonzero: '1/0' is rejected here (written
    literals are author input, unlike computed divisions which totalize).
    """
    m = _RATIONAL_RE.match(text.strip())
    if m is None:
        raise ValueError(f"not a rational constant: {text!r}")
    sign, intpart, den, decimals = m.groups()
    if den is not None:
        value = make_rational(int(intpart), int(den))
    elif decimals is not None:
        value = Fraction(int(intpart)) + Fraction(int(decimals), 10 ** len(decimals))
    else:
        value = Fraction(int(intpart))
    return -value if sign == "-" else value


def format_rational(x: Rational) -> str:
    """Canonical text form: 'n/d', or just 'n' when the denominator is 1."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def decimal_repr(x: Rational) -> str | None:
    """Exact decimal text for x, or None when none exists.

    Only denominators of the form 2^a * 5^b terminate.
    """
    den = x.denominator
    if den == 1:
        return str(x.numerator)
    twos = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    fives = 0
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return None
    places = max(twos, fives)
    scaled = abs(x.numerator) * 10**places // x.denominator
    digits = str(scaled).rjust(places + 1, "0")
    sign = "-" if x < 0 else ""
    return f"{sign}{digits[:-places]}.{digits[-places:]}"
