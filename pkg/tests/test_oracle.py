import itertools
from math import comb

import pytest

from gforge import load_bundled
from gforge.groupoid import is_closure_fixed
from gforge.opens import Open, per, rel
from gforge.oracle import (PointGroupoid, SizeGuardError, all_pers, compose_isos, enumerate_isos,
                           enumerate_models, estimate_structures, identity_iso, invert_iso,
                           is_model_iso, satisfies_object, verify_groupoid_laws)
from gforge.propositional import propositionalize
from gforge.theory import Theory


def stirling2(n, s):
    if n == s:
        return 1
    if s == 0:
        return 0
    return s * stirling2(n - 1, s) + stirling2(n - 1, s - 1)


def fubini(n):
    return sum(stirling2(n, s) * _fact(s) for s in range(n + 1))


def _fact(n):
    return 1 if n < 2 else n * _fact(n - 1)


def total_orders(k):
    return sum(comb(k, s) * fubini(s) for s in range(1, k + 1))


def models_with_classes(k, c):
    return sum(comb(k, d) * stirling2(d, c) * _fact(c) for d in range(c, k + 1))


def test_per_counts():
    # partial equivalence relations on k points: sum C(k,d) Bell(d)
    bell = [1, 1, 2, 5, 15]
    for k in range(1, 5):
        assert len(all_pers(k)) == sum(comb(k, d) * bell[d] for d in range(k + 1))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_total_order_counts_match_closed_form(linear_order, k):
    assert len(enumerate_models(linear_order, k)) == total_orders(k)
    assert total_orders(2) == 5 and total_orders(3) == 25


@pytest.mark.parametrize("k", [2, 3])
def test_iso_counts_match_closed_form(linear_order, k):
    pg = PointGroupoid.build(linear_order, k)
    # a finite total order is rigid, so isos pair up models with equally many classes
    assert len(pg.isos) == sum(models_with_classes(k, c) ** 2 for c in range(1, k + 1))


def satisfies_assignment(true, o):
    return any(all(g in true for g in t) for t in o.terms)


def frame_points(p, gens):
    """Truth assignments on ``gens`` closed under every presented inequality."""
    out = []
    for bits in itertools.product((False, True), repeat=len(gens)):
        true = {g for g, b in zip(gens, bits) if b}
        if all(not satisfies_assignment(true, q.lhs) or satisfies_assignment(true, q.rhs)
               for q in p.inequalities):
            out.append(frozenset(true))
    return out


def test_object_presentation_points_are_exactly_the_models(linear_order):
    p = propositionalize(linear_order, 2)
    pts = frame_points(p, list(p.generators))
    assert len(pts) == 5
    assert set(pts) == {m.facts for m in enumerate_models(linear_order, 2)}


def test_arrow_presentation_points_are_exactly_the_isos(G2, pg2):
    gens = sorted(g for g in G2.arrows.generators if g.kind == "alpha")
    ineqs = G2.arrows.inequalities
    expected = {(f.source, f.target, frozenset(f.graph["X"])) for f in pg2.isos}
    found = set()
    for a, b in itertools.product(pg2.models, repeat=2):
        base = {g.retag(1) for g in a.facts} | {g.retag(2) for g in b.facts}
        for bits in itertools.product((False, True), repeat=len(gens)):
            true = base | {g for g, x in zip(gens, bits) if x}
            if all(not satisfies_assignment(true, q.lhs) or satisfies_assignment(true, q.rhs)
                   for q in ineqs):
                found.add((a, b, frozenset(g.args for g, x in zip(gens, bits) if x)))
    assert found == expected


def test_propositional_corpus_counts():
    surj = load_bundled("partial_surjection")
    # maps {0,1,2} -> {a,b,undefined} hitting both a and b
    assert len(enumerate_models(surj, 1)) == 3 ** 3 - 2 * 2 ** 3 + 1
    demo = load_bundled("propositional_demo")
    assert [sorted(m.relations) for m in enumerate_models(demo, 1)] == [["p", "q", "r"]] * 2
    assert {frozenset(r for r, ts in m.interp if ts) for m in enumerate_models(demo, 1)} == \
        {frozenset({"r"}), frozenset({"p", "q"})}


def dedekind_brute_force(with_roundedness):
    grid = ["0", "h", "1"]
    count = 0
    for lbits in itertools.product((0, 1), repeat=3):
        for ubits in itertools.product((0, 1), repeat=3):
            L = {q for q, b in zip(grid, lbits) if b}
            U = {q for q, b in zip(grid, ubits) if b}
            pos = {q: i for i, q in enumerate(grid)}
            ok = (all(p in L for q in L for p in grid if pos[p] < pos[q])
                  and all(p in U for q in U for p in grid if pos[p] > pos[q])
                  and L and U and not (L & U)
                  and all(q in L or r in U for q in grid for r in grid if pos[q] < pos[r]))
            if with_roundedness:
                ok = ok and all(any(pos[r] > pos[q] for r in L) for q in L) \
                    and all(any(pos[r] < pos[q] for r in U) for q in U)
            count += bool(ok)
    return count


def test_dedekind_grid_against_independent_brute_force():
    t = load_bundled("dedekind_grid")
    assert len(enumerate_models(t, 1)) == dedekind_brute_force(True) == 0
    unrounded = Theory(t.name, t.sorts, t.relations,
                       tuple(a for a in t.axioms if "round" not in a.label))
    assert len(enumerate_models(unrounded, 1)) == dedekind_brute_force(False) == 3


def test_size_guard(linear_order, monkeypatch):
    assert estimate_structures(linear_order, 3) > 100
    with pytest.raises(SizeGuardError):
        enumerate_models(linear_order, 3, max_structures=100)
    monkeypatch.setenv("GFORGE_MAX_STRUCTURES", "100")
    with pytest.raises(SizeGuardError):
        enumerate_models(linear_order, 3)
    assert len(enumerate_models(linear_order, 3, guard=False)) == 25


def test_satisfaction_rejects_out_of_range_and_foreign_generators(pg2):
    m = pg2.models[0]
    with pytest.raises(ValueError):
        satisfies_object(m, Open.gen(rel("leq", 0, 2)))
    with pytest.raises(ValueError):
        satisfies_object(m, Open.gen(rel("leq", 0, 1, copy=1)))


def test_iso_algebra(linear_order, pg3):
    for f in pg3.isos[:40]:
        assert is_model_iso(f, linear_order)
        assert invert_iso(invert_iso(f)) == f
        assert compose_isos(f, invert_iso(f)) == identity_iso(f.source)
    a = pg3.models[0]
    assert enumerate_isos(a, a, linear_order) == [identity_iso(a)]


def test_groupoid_laws_hold_and_tampering_is_detected(linear_order):
    pg = PointGroupoid.build(linear_order, 2)
    assert verify_groupoid_laws(pg).ok
    (j, l), _ = next((key, v) for key, v in pg.composition.items() if key[0] != key[1])
    pg.composition[(j, l)] = -1
    assert not verify_groupoid_laws(pg).ok


def test_orbits_of_total_orders(pg3):
    # orbit = all models with the same number of classes
    for m in pg3.models:
        orbit = pg3.orbit_saturate([m])
        assert orbit == {n for n in pg3.models if len(n.classes["X"]) == len(m.classes["X"])}


def test_open_hull_is_an_up_set(pg3):
    some = pg3.models[:3]
    hull = pg3.open_hull(some)
    assert set(some) <= hull
    for a in hull:
        for b in pg3.models:
            if a.facts <= b.facts:
                assert b in hull


def test_closure_fixed_points(G3, pg3):
    inhabited = Open.of([[per("X", n, n)] for n in range(3)])
    assert is_closure_fixed(G3, inhabited, pg3.models)
    assert not is_closure_fixed(G3, Open.gen(rel("leq", 0, 1)), pg3.models)


def test_composition_domain_points_are_the_composable_pairs(G2, pg2):
    from gforge.oracle import satisfies_pair
    ineqs = G2.comp.inequalities
    for f in pg2.isos:
        for h in pg2.isos:
            ok = all(not satisfies_pair(f, h, q.lhs) or satisfies_pair(f, h, q.rhs) for q in ineqs)
            assert ok == (f.target == h.source)
