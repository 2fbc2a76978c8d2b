"""Randomized law suite for the algebra and its number system.

Every law pairs two ways of building the same budget (or number) and
checks that they agree on random ground instantiations. The suite is
deterministic for a given seed: each law draws from its own generator
seeded with "<seed>:<law name>". The same registry backs the `axioms`
CLI subcommand and the acceptance tests.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .algebra import (
    DELTA,
    EPS,
    Comp,
    Encap,
    Entry,
    Test,
    Tuplix,
    compose,
    denote_ground,
    ground_of,
    normalize,
    _random_term,
)
from .constraints import test_and, test_eq, test_leq
from .expr import (
    Abs,
    Add,
    Const,
    Expr,
    Inv,
    Mul,
    Neg,
    Var,
    div,
    evaluate,
    fold_constants,
    free_vars,
    random_expr,
    random_rational,
    sub,
    substitute,
    walk,
)
from .meadow import abs_val, div as mdiv, indicator, minv

_CHANNELS = ("a", "b", "c")
_NAMES = ("u", "v", "w")


@dataclass(frozen=True)
class Law:
    name: str
    group: str
    check: Callable[[random.Random], bool]


@dataclass(frozen=True)
class LawResult:
    name: str
    group: str
    trials: int
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0


def run_law(law: Law, trials: int, seed: int) -> LawResult:
    rng = random.Random(f"{seed}:{law.name}")
    failures = 0
    for _ in range(trials):
        if not law.check(rng):
            failures += 1
    return LawResult(law.name, law.group, trials, failures)


def run_suite(laws: Iterable[Law], trials: int, seed: int) -> list[LawResult]:
    return [run_law(law, trials, seed) for law in laws]


def render_results(results: list[LawResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = []
    for r in results:
        status = "ok" if r.passed else "FAIL"
        lines.append(f"{r.name:<{width}}  {r.trials - r.failures:>6}/{r.trials}  {status}")
    failed = [r for r in results if not r.passed]
    total = sum(r.trials for r in results)
    if failed:
        names = ", ".join(r.name for r in failed)
        lines.append(f"{len(failed)} law(s) failed: {names}")
    else:
        lines.append(f"all {len(results)} laws passed ({total} trials)")
    return "\n".join(lines) + "\n"


# --- generators ----------------------------------------------------------------


def _term(rng: random.Random, max_size: int = 5) -> Tuplix:
    return _random_term(rng, rng.randint(1, max_size), _CHANNELS, _NAMES)


def _expr(rng: random.Random) -> Expr:
    return random_expr(rng, _NAMES, rng.randint(0, 3))


def _channels(rng: random.Random) -> frozenset[str]:
    return frozenset(rng.sample(_CHANNELS, k=rng.randint(0, len(_CHANNELS))))


def _valuation(rng: random.Random) -> dict[str, Fraction]:
    return {name: random_rational(rng) for name in _NAMES}


def _same(rng: random.Random, t1: Tuplix, t2: Tuplix) -> bool:
    v = _valuation(rng)
    return denote_ground(t1, v) == denote_ground(t2, v)


# --- the budget algebra ----------------------------------------------------------


def _law_comp_commutes(rng):
    x, y = _term(rng), _term(rng)
    return _same(rng, Comp(x, y), Comp(y, x))


def _law_comp_associates(rng):
    x, y, z = _term(rng), _term(rng), _term(rng)
    return _same(rng, Comp(Comp(x, y), z), Comp(x, Comp(y, z)))


def _law_eps_unit(rng):
    x = _term(rng)
    return _same(rng, Comp(x, EPS), x)


def _law_delta_absorbs(rng):
    x = _term(rng)
    return _same(rng, Comp(x, DELTA), DELTA)


def _law_entry_accumulates(rng):
    channel = rng.choice(_CHANNELS)
    u, v = _expr(rng), _expr(rng)
    return _same(rng, Comp(Entry(channel, u), Entry(channel, v)), Entry(channel, Add(u, v)))


def _law_test_self_division(rng):
    u = _expr(rng)
    return _same(rng, Test(u), Test(div(u, u)))


def _law_test_zero_void(rng):
    e = _expr(rng)
    return _same(rng, Test(Const(Fraction(0))), EPS) and _same(rng, Test(sub(e, e)), EPS)


def _law_test_one_null(rng):
    e = _expr(rng)
    nonzero = Add(div(e, e), Const(Fraction(1)))  # evaluates to 1 or 2
    return _same(rng, Test(Const(Fraction(1))), DELTA) and _same(rng, Test(nonzero), DELTA)


def _law_tests_combine(rng):
    u, v = _expr(rng), _expr(rng)
    return _same(rng, Comp(Test(u), Test(v)), Test(Add(div(u, u), div(v, v))))


def _law_test_entry_substitution(rng):
    channel = rng.choice(_CHANNELS)
    u, v = _expr(rng), _expr(rng)
    guard = Test(sub(u, v))
    return _same(rng, Comp(guard, Entry(channel, u)), Comp(guard, Entry(channel, v)))


def _law_encap_eps(rng):
    h = _channels(rng)
    return _same(rng, Encap(h, EPS), EPS)


def _law_encap_delta(rng):
    h = _channels(rng)
    return _same(rng, Encap(h, DELTA), DELTA)


def _law_encap_test(rng):
    h = _channels(rng)
    u = _expr(rng)
    return _same(rng, Encap(h, Test(u)), Test(u))


def _law_encap_entry(rng):
    h = _channels(rng)
    channel = rng.choice(_CHANNELS)
    u = _expr(rng)
    expected: Tuplix = Test(u) if channel in h else Entry(channel, u)
    return _same(rng, Encap(h, Entry(channel, u)), expected)


def _law_encap_distributes(rng):
    h = _channels(rng)
    x, y = _term(rng), _term(rng)
    return _same(rng, Encap(h, Comp(x, Encap(h, y))), Comp(Encap(h, x), Encap(h, y)))


def _law_encap_decomposes(rng):
    h1, h2 = _channels(rng), _channels(rng)
    x = _term(rng)
    return _same(rng, Encap(h1 | h2, x), Encap(h1, Encap(h2, x)))


def _law_encap_empty_identity(rng):
    x = _term(rng)
    return _same(rng, Encap(frozenset(), x), x)


def tuplix_laws() -> list[Law]:
    checks = [
        ("comp-commutes", _law_comp_commutes),
        ("comp-associates", _law_comp_associates),
        ("eps-unit", _law_eps_unit),
        ("delta-absorbs", _law_delta_absorbs),
        ("entry-accumulates", _law_entry_accumulates),
        ("test-self-division", _law_test_self_division),
        ("test-zero-void", _law_test_zero_void),
        ("test-one-null", _law_test_one_null),
        ("tests-combine", _law_tests_combine),
        ("test-entry-substitution", _law_test_entry_substitution),
        ("encap-eps", _law_encap_eps),
        ("encap-delta", _law_encap_delta),
        ("encap-test", _law_encap_test),
        ("encap-entry", _law_encap_entry),
        ("encap-distributes", _law_encap_distributes),
        ("encap-decomposes", _law_encap_decomposes),
        ("encap-empty-identity", _law_encap_empty_identity),
    ]
    return [Law(name, "tuplix", check) for name, check in checks]


# --- normalizer against the direct evaluator --------------------------------------


def _law_normalize_matches_direct(rng):
    t = _random_term(rng, rng.randint(1, 6), _CHANNELS, _NAMES)
    v = _valuation(rng)
    return ground_of(normalize(t, v)) == denote_ground(t, v)


def _law_normalize_closed_terms(rng):
    t = _random_term(rng, rng.randint(1, 6), _CHANNELS, ())
    return ground_of(normalize(t)) == denote_ground(t)


def oracle_laws() -> list[Law]:
    return [
        Law("normalize-matches-direct", "oracle", _law_normalize_matches_direct),
        Law("normalize-closed-terms", "oracle", _law_normalize_closed_terms),
    ]


# --- the number system -------------------------------------------------------------


def _nums(rng, n):
    return [random_rational(rng) for _ in range(n)]


def meadow_laws() -> list[Law]:
    checks = [
        ("add-commutes", lambda rng: (lambda x, y: x + y == y + x)(*_nums(rng, 2))),
        ("add-associates", lambda rng: (lambda x, y, z: (x + y) + z == x + (y + z))(*_nums(rng, 3))),
        ("mul-commutes", lambda rng: (lambda x, y: x * y == y * x)(*_nums(rng, 2))),
        ("mul-associates", lambda rng: (lambda x, y, z: (x * y) * z == x * (y * z))(*_nums(rng, 3))),
        ("mul-distributes", lambda rng: (lambda x, y, z: x * (y + z) == x * y + x * z)(*_nums(rng, 3))),
        ("add-zero-identity", lambda rng: (lambda x: x + 0 == x)(*_nums(rng, 1))),
        ("mul-one-identity", lambda rng: (lambda x: x * 1 == x)(*_nums(rng, 1))),
        ("add-inverse", lambda rng: (lambda x: x + (-x) == 0)(*_nums(rng, 1))),
        ("inverse-involution", lambda rng: (lambda x: minv(minv(x)) == x)(*_nums(rng, 1))),
        ("restricted-inverse", lambda rng: (lambda x: x * (x * minv(x)) == x)(*_nums(rng, 1))),
        ("zero-inverse", lambda rng: (lambda x: minv(Fraction(0)) == 0 and mdiv(x, Fraction(0)) == 0)(*_nums(rng, 1))),
        (
            "indicator-range",
            lambda rng: (lambda x: indicator(x) in (0, 1) and (indicator(x) == 0) == (x == 0))(*_nums(rng, 1)),
        ),
        ("abs-nonnegative", lambda rng: (lambda x: abs_val(x) >= 0 and abs_val(x) in (x, -x))(*_nums(rng, 1))),
    ]
    return [Law(name, "meadow", check) for name, check in checks]


# --- constraint encodings -------------------------------------------------------------


def _law_leq_encoding(rng):
    p, q = _nums(rng, 2)
    form = denote_ground(test_leq(Const(p), Const(q)))
    return form.is_null == (not p <= q)


def _law_eq_encoding(rng):
    p, q = _nums(rng, 2)
    if rng.random() < 0.3:
        q = p
    form = denote_ground(test_eq(Const(p), Const(q)))
    return form.is_null == (p != q)


def _law_conjunction_encoding(rng):
    parts = [_expr(rng) for _ in range(rng.randint(2, 4))]
    v = _valuation(rng)
    combined = denote_ground(test_and(parts), v)
    separate = denote_ground(compose(*[Test(p) for p in parts]), v)
    return combined == separate


def _law_constraint_nodes(rng):
    kinds = (Const, Var, Add, Mul, Neg, Inv, Abs)
    p, q = _expr(rng), _expr(rng)
    built = [test_leq(p, q), test_eq(p, q), test_and([p, q])]
    return all(isinstance(node, kinds) for t in built for node in walk(t.arg))


def constraint_laws() -> list[Law]:
    return [
        Law("leq-encoding", "constraints", _law_leq_encoding),
        Law("eq-encoding", "constraints", _law_eq_encoding),
        Law("conjunction-encoding", "constraints", _law_conjunction_encoding),
        Law("constraint-nodes", "constraints", _law_constraint_nodes),
    ]


# --- expression layer ------------------------------------------------------------------


def _law_fold_preserves_evaluation(rng):
    e = random_expr(rng, _NAMES, rng.randint(0, 5))
    v = _valuation(rng)
    return evaluate(fold_constants(e), v) == evaluate(e, v)


def _law_fold_idempotent(rng):
    e = fold_constants(random_expr(rng, _NAMES, rng.randint(0, 5)))
    return fold_constants(e) == e


def _law_substitute_binds(rng):
    e = random_expr(rng, _NAMES, rng.randint(0, 4))
    name = rng.choice(_NAMES)
    r = random_rational(rng)
    rest = {n: random_rational(rng) for n in _NAMES if n != name}
    bound = substitute(e, name, Const(r))
    if name in free_vars(bound):
        return False
    return evaluate(bound, rest) == evaluate(e, {**rest, name: r})


def expr_laws() -> list[Law]:
    return [
        Law("fold-preserves-evaluation", "expr", _law_fold_preserves_evaluation),
        Law("fold-idempotent", "expr", _law_fold_idempotent),
        Law("substitute-binds", "expr", _law_substitute_binds),
    ]


def all_laws() -> list[Law]:
    return tuplix_laws() + oracle_laws() + meadow_laws() + constraint_laws() + expr_laws()
