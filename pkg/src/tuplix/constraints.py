"""Constraints expressed as budget tests.

Every constraint becomes a single Test whose argument is zero exactly
when the constraint holds, using only the expression constructors:

  p <= q   via |q - p| - (q - p), which is 0 iff q >= p
  p == q   via p - q
  and      via f1/f1 + ... + fn/fn, a sum of zero-or-one indicators
           that is 0 iff every argument is 0
"""

from __future__ import annotations

from functools import reduce

from .algebra import Test
from .expr import Abs, Add, Expr, div, sub


def leq_expr(p: Expr, q: Expr) -> Expr:
    """Zero iff p <= q."""
    d = sub(q, p)
    return sub(Abs(d), d)


def test_leq(p: Expr, q: Expr) -> Test:
    return Test(leq_expr(p, q))


def test_eq(p: Expr, q: Expr) -> Test:
    return Test(sub(p, q))


def conjunction_expr(args: list[Expr]) -> Expr:
    """Zero iff every argument is zero; a left-folded sum of indicators."""
    if not args:
        raise ValueError("conjunction of no constraints")
    return reduce(Add, (div(a, a) for a in args))


def test_and(args: list[Expr]) -> Test:
    """Combine test arguments into one test that passes iff all would."""
    return Test(conjunction_expr(args))
