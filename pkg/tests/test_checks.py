import pytest

from gforge import build_groupoid, load_bundled
from gforge import checks
from gforge.oracle import PointGroupoid


@pytest.mark.parametrize("suite", checks.SUITES)
def test_every_non_informational_check_passes_at_k3(G3, pg3, suite):
    for r in checks.run_suite(suite, G3, pg3, seed=0, samples=200):
        if not checks.informational(r):
            assert r.passed, (r.name, r.failures)
        assert r.checked > 0


def test_informational_checks_are_flagged(G3, pg3):
    results = checks.run_suite("adjunction", G3, pg3) + checks.run_suite("closure", G3, pg3)
    info = [r for r in results if checks.informational(r)]
    assert len(info) == 2
    assert all(not r.passed for r in info)


def test_hull_adjunction_needs_room_for_fresh_witnesses(G2, pg2):
    # At k=2 a source with two singleton classes cannot be relabelled onto a
    # target where 0 ~ 1, although the presented left adjoint allows it.
    r = checks.check_adjunction_hull(G2, pg2, checks.arrow_basics(G2, 2))
    assert r.failure_count == 4
    assert "per2.X(0,1) & leq1(0,1)" in r.failures[0]


def test_well_definedness(G3, pg3, G2, pg2):
    assert checks.check_well_definedness(G3, pg3, samples=5).passed
    assert not checks.check_well_definedness(G2, pg2, samples=20).passed


def test_literal_composition_is_caught(linear_order, pg2):
    G = build_groupoid(linear_order, 2, composition="literal")
    r = checks.check_composition_agreement(G, pg2)
    assert not r.passed
    assert r.failures[0].startswith("m*(alpha.X(")
    assert checks.check_composition_agreement(build_groupoid(linear_order, 2), pg2).passed


@pytest.mark.parametrize("name", ["propositional_demo", "partial_surjection", "dedekind_grid"])
def test_propositional_theories_degenerate(name):
    t = load_bundled(name)
    G = build_groupoid(t, 2)
    pg = PointGroupoid.build(t, 2)
    assert checks.check_propositional_degeneration(G).passed
    for suite in checks.SUITES:
        assert all(r.passed for r in checks.run_suite(suite, G, pg, samples=100))


def test_degeneration_rejects_sorted_theories(G2):
    assert not checks.check_propositional_degeneration(G2).passed


def test_results_are_deterministic_for_a_seed(G2, pg2):
    a = checks.check_frobenius_semantic(G2, pg2, n=50, seed=7).to_json()
    b = checks.check_frobenius_semantic(G2, pg2, n=50, seed=7).to_json()
    assert a == b


def test_unknown_suite():
    with pytest.raises(ValueError):
        checks.run_suite("nope", None, None)
