"""Terms, formulas, substitutions, and binder utilities."""

import pytest

from fohh.syntax import (
    All,
    And,
    Atom,
    BinderMismatch,
    Clause,
    Classification,
    Compound,
    Const,
    Exists,
    Fact,
    Forall,
    FreshNames,
    Implies,
    Int,
    Param,
    Program,
    RawAnd,
    RawAtom,
    RawExists,
    RawForall,
    RawImplies,
    Substitution,
    Var,
    binder_witness,
    carriers,
    classify,
    instantiate,
    is_atom,
    is_ground,
    params_of,
    replace_term,
    subterms,
    to_clause,
    to_goal,
    to_raw,
    vars_of,
)


def c(functor, *args):
    return Compound(functor, args)


A, B, X, Y = Const("a"), Const("b"), Var("X"), Var("Y")


class TestTerms:
    def test_compound_requires_arguments(self):
        """Nullary applications are written as constants, not compounds."""
        with pytest.raises(ValueError):
            Compound("f", ())

    def test_atoms_are_constants_or_compounds(self):
        assert is_atom(Const("p"))
        assert is_atom(c("p", A))
        assert not is_atom(Int(3))
        assert not is_atom(X)

    def test_subterms_enumerates_spine_and_leaves(self):
        t = c("f", c("g", X, A), Int(2))
        assert set(subterms(t)) == {t, c("g", X, A), X, A, Int(2)}

    def test_groundness_excludes_variables_and_parameters(self):
        assert is_ground(c("f", A, Int(0)))
        assert not is_ground(c("f", X))
        assert not is_ground(c("f", Param("x", 1)))

    def test_vars_and_params_are_separated(self):
        t = c("f", X, Param("u", 2), Y)
        assert list(vars_of(t)) == [X, Y]
        assert list(params_of(t)) == [Param("u", 2)]

    def test_var_levels_distinguish(self):
        assert Var("X", 0) != Var("X", 1)
        assert Param("x", 1) != Var("x", 1)


class TestClassification:
    def test_atom_is_both_goal_and_clause(self):
        assert classify(RawAtom(c("p", A))) == Classification.BOTH

    def test_conjunction_is_goal_only(self):
        raw = RawAnd(RawAtom(Const("p")), RawAtom(Const("q")))
        assert classify(raw) == Classification.G_ONLY

    def test_clause_shape_is_clause_only(self):
        raw = RawImplies(RawAnd(RawAtom(Const("q")), RawAtom(Const("r"))),
                         RawAtom(Const("p")))
        assert classify(raw) == Classification.D_ONLY

    def test_conjunction_under_forall_cannot_be_a_clause(self):
        raw = RawForall("X", RawAnd(RawAtom(Const("p")), RawAtom(Const("q"))))
        assert classify(raw) == Classification.G_ONLY
        with pytest.raises(ValueError):
            to_clause(raw)

    def test_existential_cannot_be_a_clause(self):
        raw = RawExists("X", RawAtom(c("p", Var("X"))))
        assert to_goal(raw) == Exists("X", Atom(c("p", X)))
        with pytest.raises(ValueError):
            to_clause(raw)

    def test_round_trip_through_raw(self):
        g = Forall("X", Implies(Fact(c("q", X)), Atom(c("q", X))))
        assert to_goal(to_raw(g)) == g
        d = All("X", Clause(Atom(c("q", X)), c("p", X)))
        assert to_clause(to_raw(d)) == d


class TestProgram:
    def test_loading_a_hypothesis_puts_it_first(self):
        base = Program((Fact(A),))
        extended = base.extended(Fact(B))
        assert tuple(extended) == (Fact(B), Fact(A))
        assert tuple(base) == (Fact(A),)  # unchanged

    def test_len_counts_clauses(self):
        assert len(Program((Fact(A), Fact(B)))) == 2


class TestSubstitution:
    def test_apply_replaces_vars_and_params(self):
        s = Substitution({X: A, Param("u", 1): B})
        assert s.apply(c("f", X, Param("u", 1))) == c("f", A, B)

    def test_apply_under_shadowing_binder_leaves_placeholder(self):
        s = Substitution({X: A})
        g = Exists("X", Atom(c("p", X)))
        assert s.apply(g) == g

    def test_apply_descends_into_non_shadowing_binder(self):
        s = Substitution({Y: A})
        g = Exists("X", Atom(c("p", X, Y)))
        assert s.apply(g) == Exists("X", Atom(c("p", X, A)))

    def test_capture_is_avoided_by_renaming_the_binder(self):
        """A value mentioning the binder's name must not be captured."""
        s = Substitution({Y: Param("X", 1)})
        g = Forall("X", Atom(c("p", X, Y)))
        applied = s.apply(g)
        assert applied.var != "X"
        assert applied.body == Atom(c("p", Var(applied.var), Param("X", 1)))

    def test_no_rename_when_binding_is_irrelevant(self):
        """Bindings that cannot land inside the body leave the binder alone."""
        s = Substitution({Var("Z"): Param("X", 1)})
        g = Forall("X", Atom(c("p", X)))
        assert s.apply(g) == g

    def test_restricted_and_extended(self):
        s = Substitution({X: A, Y: B})
        assert s.restricted({X}).domain() == {X}
        assert s.extended({Var("Z"): A}).domain() == {X, Y, Var("Z")}

    def test_equality_is_by_bindings(self):
        assert Substitution({X: A}) == Substitution({X: A})
        assert Substitution({X: A}) != Substitution({X: B})


class TestBinderUtilities:
    def test_instantiate_replaces_the_placeholder(self):
        g = instantiate("X", A, Atom(c("p", X, Y)))
        assert g == Atom(c("p", A, Y))

    def test_replace_term_rewrites_everywhere(self):
        g = And(Atom(c("p", X)), Atom(c("q", c("f", X))))
        assert replace_term(X, A, g) == And(Atom(c("p", A)), Atom(c("q", c("f", A))))

    def test_binder_witness_recovers_the_instance(self):
        body = Atom(c("p", X, c("f", X)))
        inst = Atom(c("p", A, c("f", A)))
        assert binder_witness("X", body, inst) == A

    def test_binder_witness_vacuous_is_none(self):
        assert binder_witness("X", Atom(Const("p")), Atom(Const("p"))) is None

    def test_binder_witness_rejects_inconsistent_instances(self):
        body = Atom(c("p", X, X))
        inst = Atom(c("p", A, B))
        with pytest.raises(BinderMismatch):
            binder_witness("X", body, inst)

    def test_binder_witness_respects_shadowing(self):
        body = Exists("X", Atom(c("p", X)))
        assert binder_witness("X", body, body) is None

    def test_carriers_walks_formulas(self):
        g = Implies(Fact(c("q", X)), Exists("Z", Atom(c("p", Param("u", 1)))))
        assert set(carriers(g)) == {X, Param("u", 1)}


class TestFreshNames:
    def test_fresh_vars_cannot_collide_with_source_names(self):
        """Generated names contain a character the tokenizer rejects."""
        names = FreshNames()
        v = names.fresh_var("X", 3)
        assert "." in v.name
        assert v.level == 3

    def test_fresh_params_prefer_the_binder_hint(self):
        names = FreshNames()
        assert names.fresh_param("X", 1) == Param("X", 1)
        second = names.fresh_param("X", 2)
        assert second.name != "X" and second.name.startswith("X")

    def test_fresh_vars_are_distinct(self):
        names = FreshNames()
        assert names.fresh_var("X", 1) != names.fresh_var("X", 1)
