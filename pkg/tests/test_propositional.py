import pytest

from gforge import load_bundled, parse_theory
from gforge.opens import Open, per, rel
from gforge.propositional import (IndexSet, InvalidTheory, double_iso_expansion,
                                  instantiate_formula, iso_expansion, propositionalize)
from gforge.theory import FALSE, TRUE, Atom, Relation, Sort, Theory


def test_generator_count_is_k_squared_per_binary_symbol(linear_order):
    for k in (1, 2, 3, 4):
        p = propositionalize(linear_order, k)
        assert len(p.generators) == 2 * k * k
    assert len(propositionalize(linear_order, IndexSet(2)).generators) == 8


def test_totality_instance(linear_order):
    p = propositionalize(linear_order, 2)
    want_lhs = Open.basic([per("X", 0, 0), per("X", 1, 1)])
    want_rhs = Open.gen(rel("leq", 0, 1)) | Open.gen(rel("leq", 1, 0))
    assert any(q.lhs == want_lhs and q.rhs == want_rhs for q in p.inequalities)


def test_per_and_compatibility_families(linear_order):
    p = propositionalize(linear_order, 2)
    ineqs = {(q.lhs, q.rhs) for q in p.inequalities}
    assert (Open.gen(per("X", 0, 1)), Open.gen(per("X", 1, 0))) in ineqs
    assert (Open.basic([per("X", 0, 1), per("X", 1, 0)]), Open.gen(per("X", 0, 0))) in ineqs
    assert (Open.gen(rel("leq", 0, 1)), Open.basic([per("X", 0, 0), per("X", 1, 1)])) in ineqs
    compat = Open.basic([rel("leq", 0, 0), per("X", 0, 1), per("X", 0, 0)])
    assert (compat, Open.gen(rel("leq", 1, 0))) in ineqs


def test_trivial_instances_are_dropped(linear_order):
    p = propositionalize(linear_order, 2)
    # [n~m] <= [n~m] and [0~0]&[0~0] <= [0~0] never appear
    assert all(q.lhs != q.rhs for q in p.inequalities)
    assert (Open.gen(per("X", 0, 0)), Open.gen(per("X", 0, 0))) not in {(q.lhs, q.rhs) for q in p.inequalities}


def test_inhabitedness_is_a_guarded_join(linear_order):
    p = propositionalize(linear_order, 3)
    want = Open.of([[per("X", n, n)] for n in range(3)])
    assert any(q.lhs.is_top and q.rhs == want for q in p.inequalities)


def test_existential_witnessed_by_a_relation_needs_no_guard():
    t = parse_theory("sorts: X\nrelations: r(X)\naxioms:\n  a: [] true => exists x:X. r(x)\n")
    o = instantiate_formula(t.axioms[0].conclusion, {}, 2)
    assert o == Open.of([[rel("r", 0)], [rel("r", 1)]])


def test_unbound_variable_raises():
    X = Sort("X")
    r = Relation("r", (X,))
    with pytest.raises(KeyError):
        instantiate_formula(Atom(r, ("x",)), {}, 2)


def test_true_and_false_become_top_and_bottom():
    assert instantiate_formula(TRUE, {}, 2).is_top
    assert instantiate_formula(FALSE, {}, 2).is_bottom


def test_invalid_theory_is_rejected():
    X = Sort("X")
    bad = Theory("bad", (), (Relation("r", (X,)),), ())
    with pytest.raises(InvalidTheory):
        propositionalize(bad, 2)


def test_iso_expansion_shape(linear_order):
    t = iso_expansion(linear_order)
    assert (len(t.sorts), len(t.relations), len(t.axioms)) == (2, 3, 16)
    assert t.name == "linear_order_iso"
    labels = {a.label for a in t.axioms}
    assert {"alpha_X_wd_fwd", "alpha_X_wd_bwd", "alpha_X_surj", "alpha_X_total",
            "alpha_leq_pres_fwd", "alpha_leq_pres_bwd"} <= labels
    tt = double_iso_expansion(linear_order)
    assert (len(tt.sorts), len(tt.relations)) == (3, 5)
    assert len(tt.axioms) == 3 * 5 + 2 * 6


def test_empty_theory_has_empty_presentation():
    p = propositionalize(Theory(), 3)
    assert p.generators == () or list(p.generators) == []
    assert list(p.inequalities) == []


def test_dedekind_grid_is_propositional():
    t = load_bundled("dedekind_grid")
    assert t.is_propositional
    p = propositionalize(t, 4)
    assert len(p.generators) == len(t.relations)
