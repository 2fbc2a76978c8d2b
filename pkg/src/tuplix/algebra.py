"""Budget terms: entries, tests, composition and encapsulation.

A term describes financial commitments on named channels. The building
blocks are:

  Eps            the empty budget (no commitments)
  Delta          the impossible budget (absorbs everything)
  Entry(a, u)    amount u attached to channel a; negative u is a receipt
  Test(u)        a guard that is void when u evaluates to 0, impossible
                 otherwise
  Comp(x, y)     merge of two budgets; amounts on a shared channel add up
  Encap(H, x)    settle the channels in H internally: each must balance
                 to zero, and then disappears from the budget

Two views are provided. `denote_ground` evaluates a fully bound term to
either Null or a finite channel->amount map, and is deliberately the
simplest possible recursion so it can act as an oracle. `normalize`
reduces a partially bound term to a canonical form with residual
symbolic tests and per-channel amounts, and must agree with the oracle
whenever the term is fully bound.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Union

from .expr import (
    Const,
    Expr,
    Add,
    Neg,
    Var,
    Valuation,
    evaluate,
    fold_constants,
    free_vars,
    is_identifier,
    pretty,
    random_expr,
    random_rational,
    sort_key,
    substitute_all,
)
from .meadow import Rational


@dataclass(frozen=True)
class Eps:
    pass


@dataclass(frozen=True)
class Delta:
    span: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Entry:
    channel: str
    amount: Expr

    def __post_init__(self):
        if not is_identifier(self.channel):
            raise ValueError(f"invalid channel name: {self.channel!r}")


@dataclass(frozen=True)
class Test:
    __test__ = False  # keep pytest from collecting this class

    arg: Expr
    # Where the test came from, for violation reports; never part of the
    # term's identity.
    label: str | None = field(default=None, compare=False)
    span: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Comp:
    left: "Tuplix"
    right: "Tuplix"


@dataclass(frozen=True)
class Encap:
    channels: frozenset[str]
    body: "Tuplix"
    span: str | None = field(default=None, compare=False)

    def __post_init__(self):
        for channel in self.channels:
            if not is_identifier(channel):
                raise ValueError(f"invalid channel name: {channel!r}")


Tuplix = Union[Eps, Delta, Entry, Test, Comp, Encap]

EPS = Eps()
DELTA = Delta()


def encap(channels: Iterable[str], body: Tuplix, span: str | None = None) -> Encap:
    return Encap(frozenset(channels), body, span)


def compose(*terms: Tuplix) -> Tuplix:
    """Left-associated composition; the empty composition is Eps."""
    if not terms:
        return EPS
    return reduce(Comp, terms)


def free_vars_tuplix(t: Tuplix) -> frozenset[str]:
    names: set[str] = set()
    stack = [t]
    while stack:
        node = stack.pop()
        match node:
            case Eps() | Delta():
                pass
            case Entry(_, amount):
                names |= free_vars(amount)
            case Test(arg):
                names |= free_vars(arg)
            case Comp(left, right):
                stack.append(left)
                stack.append(right)
            case Encap(_, body):
                stack.append(body)
    return frozenset(names)


# ---------------------------------------------------------------------------
# Ground denotation


@dataclass(frozen=True)
class GroundForm:
    """Value of a fully bound term: Null, or a channel->amount map.

    An explicit zero entry is kept distinct from no entry at all: a
    channel carrying amount 0 is still a commitment on that channel.
    """

    entries: tuple[tuple[str, Rational], ...] | None  # None encodes Null

    @classmethod
    def null(cls) -> "GroundForm":
        return cls(None)

    @classmethod
    def of(cls, amounts: Mapping[str, Rational]) -> "GroundForm":
        return cls(tuple(sorted(amounts.items())))

    @property
    def is_null(self) -> bool:
        return self.entries is None

    def as_dict(self) -> dict[str, Rational]:
        if self.entries is None:
            raise ValueError("the null budget has no entries")
        return dict(self.entries)


def denote_ground(t: Tuplix, valuation: Valuation | None = None) -> GroundForm:
    """Evaluate a term under a valuation binding every free variable."""
    v = valuation if valuation is not None else {}
    match t:
        case Eps():
            return GroundForm.of({})
        case Delta():
            return GroundForm.null()
        case Entry(channel, amount):
            return GroundForm.of({channel: evaluate(amount, v)})
        case Test(arg):
            return GroundForm.of({}) if evaluate(arg, v) == 0 else GroundForm.null()
        case Comp(left, right):
            a = denote_ground(left, v)
            b = denote_ground(right, v)
            if a.is_null or b.is_null:
                return GroundForm.null()
            amounts = a.as_dict()
            for channel, amount in b.entries:
                amounts[channel] = amounts.get(channel, Fraction(0)) + amount
            return GroundForm.of(amounts)
        case Encap(channels, body):
            inner = denote_ground(body, v)
            if inner.is_null:
                return GroundForm.null()
            amounts = inner.as_dict()
            for channel in channels:
                if channel in amounts:
                    if amounts[channel] != 0:
                        return GroundForm.null()
                    del amounts[channel]
            return GroundForm.of(amounts)
    raise TypeError(f"not a budget term: {t!r}")


# ---------------------------------------------------------------------------
# Canonical form


@dataclass(frozen=True)
class Violation:
    """A test that evaluated to a nonzero value during normalization."""

    label: str
    span: str | None
    value: Rational


@dataclass(frozen=True)
class CanonicalTuplix:
    """Normal form: Null, or residual tests plus per-channel amounts.

    Tests are folded, pairwise distinct and sorted by a structural key;
    entry amounts are folded and keyed by channel name. Violations carry
    diagnostics for a Null result and never take part in equality.
    """

    is_null: bool
    tests: tuple[Expr, ...]
    entries: tuple[tuple[str, Expr], ...]
    violations: tuple[Violation, ...] = field(default=(), compare=False)

    @property
    def is_empty(self) -> bool:
        return not self.is_null and not self.tests and not self.entries

    def entry_map(self) -> dict[str, Expr]:
        return dict(self.entries)


class _Acc:
    """Mutable state threaded through normalization."""

    __slots__ = ("null", "tests", "entries", "violations")

    def __init__(self):
        self.null = False
        self.tests: list[tuple[Expr, str | None, str | None]] = []
        self.entries: dict[str, list[Expr]] = {}
        self.violations: list[Violation] = []

    def fail(self, label: str, span: str | None, value: Rational) -> None:
        self.violations.append(Violation(label, span, value))
        self.null = True


def _sum_amounts(summands: list[Expr]) -> Expr:
    if len(summands) == 1:
        return summands[0]
    chain = reduce(Add, sorted(summands, key=sort_key))
    return fold_constants(chain)


def _norm(t: Tuplix, bindings: Mapping[str, Expr]) -> _Acc:
    acc = _Acc()
    match t:
        case Eps():
            pass
        case Delta(span):
            acc.fail("delta", span, Fraction(1))
        case Entry(channel, amount):
            folded = fold_constants(substitute_all(amount, bindings))
            acc.entries[channel] = [folded]
        case Test(arg, label, span):
            folded = fold_constants(substitute_all(arg, bindings))
            if isinstance(folded, Const):
                if folded.value != 0:
                    acc.fail(label or pretty(arg), span, folded.value)
            else:
                acc.tests.append((folded, label, span))
        case Comp(left, right):
            a = _norm(left, bindings)
            b = _norm(right, bindings)
            acc.violations = a.violations + b.violations
            if a.null or b.null:
                acc.null = True
            else:
                acc.tests = a.tests + b.tests
                acc.entries = a.entries
                for channel, summands in b.entries.items():
                    acc.entries.setdefault(channel, []).extend(summands)
        case Encap(channels, body, span):
            inner = _norm(body, bindings)
            acc.violations = inner.violations
            if inner.null:
                acc.null = True
            else:
                acc.tests = inner.tests
                acc.entries = inner.entries
                for channel in sorted(channels):
                    summands = acc.entries.pop(channel, None)
                    if summands is None:
                        continue
                    amount = _sum_amounts(summands)
                    label = f"enc{{{channel}}}"
                    if isinstance(amount, Const):
                        if amount.value != 0:
                            acc.fail(label, span, amount.value)
                    else:
                        acc.tests.append((amount, label, span))
                if acc.null:
                    acc.tests = []
                    acc.entries = {}
        case _:
            raise TypeError(f"not a budget term: {t!r}")
    if acc.null:
        acc.tests = []
        acc.entries = {}
    return acc


def _canonical_tests(found: list[tuple[Expr, str | None, str | None]]) -> tuple[Expr, ...]:
    ordered = sorted((expr for expr, _, _ in found), key=sort_key)
    out: list[Expr] = []
    for expr in ordered:
        if not out or out[-1] != expr:
            out.append(expr)
    return tuple(out)


def normalize(t: Tuplix, valuation: Valuation | None = None) -> CanonicalTuplix:
    """Reduce a term to canonical form under a (possibly partial) valuation.

    Closed tests are decided on the spot; a failing one makes the whole
    result Null and is recorded as a violation, in source traversal
    order. Open tests stay as residual expressions. Encapsulated
    channels turn their accumulated amount into a balance test.
    """
    bindings = {name: Const(value) for name, value in (valuation or {}).items()}
    acc = _norm(t, bindings)
    if acc.null:
        return CanonicalTuplix(True, (), (), tuple(acc.violations))
    entries = tuple(
        (channel, _sum_amounts(summands))
        for channel, summands in sorted(acc.entries.items())
    )
    return CanonicalTuplix(False, _canonical_tests(acc.tests), entries, ())


def to_term(c: CanonicalTuplix) -> Tuplix:
    """Rebuild a term whose normal form is the given canonical form."""
    if c.is_null:
        return DELTA
    parts: list[Tuplix] = [Test(expr) for expr in c.tests]
    parts.extend(Entry(channel, amount) for channel, amount in c.entries)
    return compose(*parts)


def ground_of(c: CanonicalTuplix) -> GroundForm | None:
    """The canonical form as a GroundForm, or None if it is still open."""
    if c.is_null:
        return GroundForm.null()
    if c.tests:
        return None
    amounts: dict[str, Rational] = {}
    for channel, amount in c.entries:
        if not isinstance(amount, Const):
            return None
        amounts[channel] = amount.value
    return GroundForm.of(amounts)


# ---------------------------------------------------------------------------
# Test substitution

# A residual test gamma(u) pins u to zero, so a test shaped x - r or
# r - x (with x not free in r) lets us rewrite x to r everywhere else.


def _solved_form(e: Expr) -> tuple[str, Expr] | None:
    match e:
        case Add(Var(name), Neg(r)) if name not in free_vars(r):
            return name, r
        case Add(r, Neg(Var(name))) if name not in free_vars(r):
            return name, r
        # folding collapses Neg(Const c) to Const(-c), so x + c needs its own arm
        case Add(Var(name), Const(value)):
            return name, Const(-value)
    return None


def apply_test_substitution(c: CanonicalTuplix, max_rounds: int = 100) -> CanonicalTuplix:
    """Propagate solved tests (x - r or r - x) into entries and other tests.

    The matched test itself is kept, so the constraint is not lost. When
    a test matches both shapes (x - y), the left variable is the one
    substituted. Runs to a fixed point, capped at `max_rounds` passes.
    The result denotes the same budget at every total valuation; closed
    contradictions revealed along the way collapse the form to Null.
    """
    if c.is_null:
        raise ValueError("cannot substitute tests in the null form")
    tests: list[Expr] = list(c.tests)
    originals: list[Expr] = list(c.tests)
    entries: dict[str, Expr] = dict(c.entries)
    violations: list[Violation] = list(c.violations)
    for _ in range(max_rounds):
        changed = False
        for i, candidate in enumerate(tests):
            solved = _solved_form(candidate)
            if solved is None:
                continue
            name, replacement = solved
            binding = {name: replacement}
            for channel, amount in entries.items():
                updated = fold_constants(substitute_all(amount, binding))
                if updated != amount:
                    entries[channel] = updated
                    changed = True
            for j, other in enumerate(tests):
                if j == i:
                    continue
                updated = fold_constants(substitute_all(other, binding))
                if updated != other:
                    tests[j] = updated
                    changed = True
        if not changed:
            break
    null = False
    kept: list[tuple[Expr, str | None, str | None]] = []
    for original, test in zip(originals, tests):
        if isinstance(test, Const):
            if test.value != 0:
                violations.append(Violation(pretty(original), None, test.value))
                null = True
        else:
            kept.append((test, None, None))
    if null:
        return CanonicalTuplix(True, (), (), tuple(violations))
    entry_items = tuple((channel, amount) for channel, amount in sorted(entries.items()))
    return CanonicalTuplix(False, _canonical_tests(kept), entry_items, tuple(violations))


# ---------------------------------------------------------------------------
# Equivalence checks and random terms


def equiv_ground(t1: Tuplix, t2: Tuplix, valuation: Valuation | None = None) -> bool:
    return denote_ground(t1, valuation) == denote_ground(t2, valuation)


def equiv_prob_tuplix(t1: Tuplix, t2: Tuplix, trials: int, seed: int) -> bool:
    """Equal ground denotations on `trials` seeded random valuations."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    names = sorted(free_vars_tuplix(t1) | free_vars_tuplix(t2))
    for _ in range(trials):
        valuation = {name: random_rational(rng) for name in names}
        if denote_ground(t1, valuation) != denote_ground(t2, valuation):
            return False
    return True


def random_tuplix(
    size: int,
    channels: Iterable[str] = ("a", "b", "c"),
    names: Iterable[str] = (),
    seed: int = 0,
) -> Tuplix:
    """Random term with roughly `size` nodes; deterministic for a seed.

    Free variables are drawn from `names` (none means a closed term);
    entry channels from `channels`. All six constructors can appear.
    """
    if size < 1:
        raise ValueError("size must be >= 1")
    rng = random.Random(seed)
    return _random_term(rng, size, tuple(channels), tuple(names))


def _random_term(
    rng: random.Random, size: int, channels: tuple[str, ...], names: tuple[str, ...]
) -> Tuplix:
    if size >= 2:
        roll = rng.random()
        if roll < 0.45:
            split = rng.randint(1, size - 1)
            return Comp(
                _random_term(rng, split, channels, names),
                _random_term(rng, size - split, channels, names),
            )
        if roll < 0.65:
            subset = rng.sample(channels, k=rng.randint(0, len(channels))) if channels else []
            return Encap(frozenset(subset), _random_term(rng, size - 1, channels, names))
    roll = rng.random()
    if channels and roll < 0.45:
        return Entry(rng.choice(channels), random_expr(rng, names, rng.randint(0, 2)))
    if roll < 0.75:
        return Test(random_expr(rng, names, rng.randint(0, 2)))
    if roll < 0.92:
        return EPS
    return DELTA
