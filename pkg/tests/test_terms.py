import random

import pytest

from opensos import (
    App,
    Equation,
    Signature,
    SignatureError,
    Var,
    apply_subst,
    canonical_rename,
    enumerate_closed_terms,
    enumerate_open_terms,
    is_closed,
    is_linear,
    term_size,
    vars_of,
)
from opensos.terms import check_term, compose_subst, is_closing_for

from gen import random_term

SIG = Signature.of({"zero": 0, "pre_a": 1, "plus": 2})


def test_signature_arity_and_lookup():
    assert SIG.arity("plus") == 2
    assert "zero" in SIG and "nope" not in SIG
    with pytest.raises(SignatureError):
        SIG.arity("nope")


def test_signature_rejects_conflicting_arities():
    with pytest.raises(SignatureError):
        Signature((("f", 1), ("f", 2)))
    with pytest.raises(SignatureError):
        SIG.merge(Signature.of({"plus": 3}))


def test_check_term_flags_bad_arity():
    check_term(App("plus", (Var("x"), App("zero"))), SIG)
    with pytest.raises(SignatureError):
        check_term(App("plus", (Var("x"),)), SIG)


def test_term_size_counts_operator_nodes():
    assert term_size(Var("x")) == 0
    assert term_size(App("zero")) == 1
    assert term_size(App("plus", (Var("x"), App("pre_a", (App("zero"),))))) == 3


def test_linearity_and_closedness():
    t = App("plus", (Var("x"), Var("x")))
    assert not is_linear(t)
    assert is_linear(App("plus", (Var("x"), Var("y"))))
    assert not is_closed(t)
    assert is_closed(App("pre_a", (App("zero"),)))


def test_substitution_composition_agrees_pointwise():
    rng = random.Random(7)
    ops = SIG.as_dict()
    for _ in range(100):
        t = random_term(rng, ops, ["x", "y", "z"], rng.randint(0, 3))
        s1 = {v: random_term(rng, ops, ["x", "y"], rng.randint(0, 2))
              for v in ("x", "y", "z")}
        s2 = {v: random_term(rng, ops, [], rng.randint(1, 2))
              for v in ("x", "y")}
        lhs = apply_subst(s2, apply_subst(s1, t))
        rhs = apply_subst(compose_subst(s2, s1), t)
        assert lhs == rhs


def test_substitution_variable_inclusion():
    rng = random.Random(11)
    ops = SIG.as_dict()
    for _ in range(100):
        t = random_term(rng, ops, ["x", "y"], rng.randint(0, 3))
        sigma = {v: random_term(rng, ops, ["u", "w"], rng.randint(0, 2))
                 for v in ("x", "y")}
        allowed = set()
        for v in vars_of(t):
            allowed |= vars_of(sigma.get(v, Var(v)))
        assert vars_of(apply_subst(sigma, t)) <= allowed


def test_canonical_rename_is_bijective_and_shape_preserving():
    t = App("plus", (Var("q"), App("plus", (Var("p"), Var("q")))))
    renamed, renaming = canonical_rename(t)
    assert renamed == App("plus", (Var("v0"), App("plus", (Var("v1"), Var("v0")))))
    assert sorted(renaming) == ["p", "q"]
    assert len(set(renaming.values())) == len(renaming)
    again, _ = canonical_rename(renamed)
    assert again == renamed  # idempotent


def test_enumeration_exhaustive_small_signatures():
    assert list(enumerate_closed_terms(Signature.of({"zero": 0}), 2)) == [App("zero")]
    two = list(enumerate_closed_terms(Signature.of({"zero": 0, "prefix_a": 1}), 2))
    assert two == [App("zero"), App("prefix_a", (App("zero"),))]
    assert list(enumerate_closed_terms(Signature.of({"f": 1}), 4)) == []


def test_enumeration_no_duplicates_and_well_formed():
    seen = set()
    for t in enumerate_closed_terms(SIG, 4):
        assert t not in seen
        seen.add(t)
        check_term(t, SIG)
        assert is_closed(t)
        assert term_size(t) <= 4
    assert seen


def test_open_enumeration_covers_variables():
    terms = list(enumerate_open_terms(SIG, 2, ("x", "y")))
    assert Var("x") in terms and Var("y") in terms
    assert App("plus", (Var("x"), Var("y"))) in terms


def test_closing_substitution_check():
    sigma = {"x": App("zero")}
    assert is_closing_for(sigma, Var("x"))
    assert not is_closing_for(sigma, App("pre_a", (Var("y"),)))


def test_equation_properness():
    assert Equation(App("zero"), App("zero")).is_proper
    assert not Equation(Var("x"), App("zero")).is_proper
    assert not Equation(App("zero"), Var("x")).is_proper
