from gforge.theory import (FALSE, TRUE, And, Atom, Eq, Exists, Or, Relation, Sequent, Sort,
                           Theory, conj, free_variables, validate_theory)

X, Y = Sort("X"), Sort("Y")
LEQ = Relation("leq", (X, X))


def theory(*axioms, relations=(LEQ,), sorts=(X,)):
    return Theory("t", sorts, relations, axioms)


def test_valid_theory_has_no_diagnostics():
    ax = Sequent("refl", (("x", X),), TRUE, Atom(LEQ, ("x", "x")))
    assert validate_theory(theory(ax)).ok


def test_undeclared_relation_is_reported():
    ghost = Relation("ghost", (X,))
    ax = Sequent("a", (("x", X),), Atom(ghost, ("x",)), FALSE)
    rep = validate_theory(theory(ax))
    assert not rep.ok
    assert "ghost" in rep.diagnostics[0].message
    assert rep.diagnostics[0].label == "a"


def test_arity_and_sort_mismatch():
    bad_arity = Sequent("a", (("x", X),), Atom(LEQ, ("x",)), FALSE)
    assert not validate_theory(theory(bad_arity)).ok
    bad_sort = Sequent("b", (("y", Y),), Atom(LEQ, ("y", "y")), FALSE)
    assert not validate_theory(theory(bad_sort, sorts=(X, Y))).ok


def test_unbound_variable_and_shadowing():
    unbound = Sequent("a", (("x", X),), Atom(LEQ, ("x", "z")), FALSE)
    assert not validate_theory(theory(unbound)).ok
    shadow = Sequent("b", (("x", X),), Exists("x", X, TRUE), FALSE)
    assert not validate_theory(theory(shadow)).ok


def test_equality_across_sorts_is_rejected():
    ax = Sequent("a", (("x", X), ("y", Y)), Eq(X, "x", "y"), FALSE)
    assert not validate_theory(theory(ax, sorts=(X, Y))).ok


def test_duplicate_declarations():
    assert not validate_theory(Theory("t", (X, X), (), ())).ok
    assert not validate_theory(Theory("t", (X,), (LEQ, LEQ), ())).ok


def test_free_variables_in_order_of_occurrence():
    f = And((Atom(LEQ, ("b", "a")), Exists("c", X, Atom(LEQ, ("c", "b")))))
    assert free_variables(f) == [("b", X), ("a", X)]


def test_conj_flattens_trivial_cases():
    a = Atom(LEQ, ("x", "x"))
    assert conj() == TRUE
    assert conj(a) == a
    assert conj(a, a) == And((a, a))
    assert FALSE == Or(())
