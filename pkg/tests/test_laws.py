import random

from tuplix import laws as L
from tuplix.algebra import Comp, denote_ground


def test_registry_is_complete():
    names = [law.name for law in L.all_laws()]
    assert len(names) == len(set(names))
    assert len(L.tuplix_laws()) == 17
    assert len(L.oracle_laws()) == 2
    groups = {law.group for law in L.all_laws()}
    assert groups == {"tuplix", "oracle", "meadow", "constraints", "expr"}


def test_suite_is_deterministic():
    first = L.run_suite(L.all_laws(), trials=25, seed=9)
    second = L.run_suite(L.all_laws(), trials=25, seed=9)
    assert first == second
    assert all(r.passed and r.trials == 25 for r in first)


def test_each_law_gets_its_own_stream():
    # same seed, different law names: the generators must not be in lockstep
    [a] = L.run_suite([L.tuplix_laws()[0]], trials=10, seed=4)
    [b] = L.run_suite([L.tuplix_laws()[1]], trials=10, seed=4)
    assert (a.name, b.name) == ("comp-commutes", "comp-associates")
    assert a.failures == b.failures == 0


def test_suite_catches_a_false_law():
    # x composed with itself is not x, except in corner cases
    def bogus(rng):
        t = L._term(rng)
        return denote_ground(Comp(t, t), L._valuation(rng)) == denote_ground(
            t, L._valuation(rng)
        )

    results = L.run_suite([*L.all_laws(), L.Law("bogus-doubling", "tuplix", bogus)], 60, 0)
    by_name = {r.name: r for r in results}
    assert not by_name["bogus-doubling"].passed
    assert by_name["bogus-doubling"].failures > 0
    assert all(r.passed for name, r in by_name.items() if name != "bogus-doubling")


def test_suite_catches_a_broken_engine(monkeypatch):
    # sabotage composition: amounts on shared channels no longer add
    import tuplix.algebra as algebra

    original = algebra.GroundForm.of

    def skewed(amounts):
        bumped = {ch: v + 1 for ch, v in amounts.items()}
        return original(bumped)

    monkeypatch.setattr(algebra.GroundForm, "of", staticmethod(skewed))
    results = L.run_suite(L.oracle_laws(), trials=40, seed=2)
    assert any(not r.passed for r in results)


def test_render_results_reports_totals():
    results = L.run_suite(L.meadow_laws(), trials=7, seed=1)
    text = L.render_results(results)
    assert "add-commutes" in text
    assert "7/7" in text
    assert "all 13 laws passed" in text


def test_render_results_names_failures():
    always_false = L.Law("always-false", "tuplix", lambda rng: False)
    text = L.render_results(L.run_suite([always_false], trials=3, seed=0))
    assert "always-false" in text
    assert "FAIL" in text
    assert "1 law(s) failed" in text


def test_law_generators_cover_zero():
    rng = random.Random(0)
    zeros = sum(L._valuation(rng)["u"] == 0 for _ in range(200))
    assert zeros > 20  # zero-inclusive sampling is load-bearing


def test_run_law_counts_failures():
    flaky = L.Law("flaky", "expr", lambda rng: rng.random() < 0.5)
    result = L.run_law(flaky, trials=100, seed=8)
    assert result.failures > 0
    assert result.trials == 100
    assert not result.passed
