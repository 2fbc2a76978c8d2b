import random
from fractions import Fraction

import pytest

from tuplix.meadow import (
    ONE,
    ZERO,
    abs_val,
    add,
    decimal_repr,
    div,
    format_rational,
    indicator,
    leq_encode,
    make_rational,
    minv,
    mul,
    neg,
    parse_rational,
    sub,
)


def test_make_rational_reduces():
    assert make_rational(4, 6) == Fraction(2, 3)
    assert make_rational(3, -6) == Fraction(-1, 2)
    assert make_rational(0, 7) == ZERO
    assert make_rational(5) == Fraction(5)


def test_make_rational_rejects_zero_denominator():
    with pytest.raises(ValueError):
        make_rational(1, 0)


def test_arithmetic_is_exact():
    assert add(Fraction(1, 3), Fraction(1, 6)) == Fraction(1, 2)
    assert sub(Fraction(1, 3), Fraction(1, 2)) == Fraction(-1, 6)
    assert mul(Fraction(2, 3), Fraction(9, 4)) == Fraction(3, 2)
    assert neg(Fraction(-5, 7)) == Fraction(5, 7)
    assert div(Fraction(2, 3), Fraction(4, 5)) == Fraction(5, 6)


def test_minv_totalizes_zero():
    assert minv(ZERO) == ZERO
    assert minv(Fraction(2, 3)) == Fraction(3, 2)
    assert minv(Fraction(-4)) == Fraction(-1, 4)


def test_div_by_zero_is_zero():
    assert div(Fraction(17, 3), ZERO) == ZERO
    assert div(ZERO, ZERO) == ZERO


def test_indicator_is_zero_or_one():
    assert indicator(ZERO) == ZERO
    assert indicator(Fraction(5, 9)) == ONE
    assert indicator(Fraction(-1, 1000)) == ONE
    rng = random.Random(7)
    for _ in range(200):
        x = Fraction(rng.randint(-40, 40), rng.randint(1, 12))
        assert indicator(x) == (ZERO if x == 0 else ONE)


def test_leq_encode_matches_order():
    # |q - p| - (q - p) vanishes exactly when p <= q
    assert leq_encode(Fraction(3), Fraction(5)) == ZERO
    assert leq_encode(Fraction(5), Fraction(5)) == ZERO
    assert leq_encode(Fraction(5), Fraction(3)) == Fraction(4)
    rng = random.Random(11)
    for _ in range(300):
        p = Fraction(rng.randint(-30, 30), rng.randint(1, 9))
        q = Fraction(rng.randint(-30, 30), rng.randint(1, 9))
        assert (leq_encode(p, q) == 0) == (p <= q)


def test_abs_val():
    assert abs_val(Fraction(-7, 2)) == Fraction(7, 2)
    assert abs_val(Fraction(7, 2)) == Fraction(7, 2)
    assert abs_val(ZERO) == ZERO


def test_parse_rational_accepts_fractions_and_decimals():
    assert parse_rational("3") == Fraction(3)
    assert parse_rational("-3") == Fraction(-3)
    assert parse_rational("+3") == Fraction(3)
    assert parse_rational("2/6") == Fraction(1, 3)
    assert parse_rational("-10/4") == Fraction(-5, 2)
    assert parse_rational("0.25") == Fraction(1, 4)
    assert parse_rational("-1.5") == Fraction(-3, 2)
    assert parse_rational("0.0") == ZERO


def test_parse_rational_rejects_garbage():
    for bad in ("", "1/0", "1/-2", "x", "1.2.3", "1 / 2", "2e3", "--4", "1/", ".5"):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_format_rational_round_trips():
    cases = [Fraction(0), Fraction(7), Fraction(-7), Fraction(2, 3), Fraction(-9, 4)]
    for x in cases:
        assert parse_rational(format_rational(x)) == x
    assert format_rational(Fraction(5)) == "5"
    assert format_rational(Fraction(-1, 3)) == "-1/3"


def test_decimal_repr_only_for_terminating_fractions():
    assert decimal_repr(Fraction(1, 4)) == "0.25"
    assert decimal_repr(Fraction(-3, 2)) == "-1.5"
    assert decimal_repr(Fraction(7)) == "7"
    assert decimal_repr(Fraction(1, 3)) is None
    assert decimal_repr(Fraction(1, 20)) == "0.05"
    assert parse_rational(decimal_repr(Fraction(9, 40))) == Fraction(9, 40)
