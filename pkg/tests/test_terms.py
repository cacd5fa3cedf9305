import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from omegaseq.terms import (
    ONE,
    Add,
    All,
    FreeVariablePresent,
    Meet,
    Mul,
    Neg,
    Sequent,
    Succ,
    Var,
    arithmetic_oracle,
    atom,
    enumerate_preorders,
    eq,
    eval_term,
    finite_preorder,
    formula_depth,
    free_vars,
    fresh_var,
    instance,
    numeral,
    numeral_value,
    parse_numeral,
    random_preorder,
    render_numeral,
    substitute,
    transitive_closure,
    uniform_truth,
    valuation_oracle,
)

from strategies import formulas, terms


@pytest.mark.parametrize("n", [1, 2, 5, 40])
def test_numerals_round_trip(n):
    assert numeral_value(numeral(n)) == n
    assert parse_numeral(render_numeral(n)) == n
    assert eval_term(numeral(n)) == n


def test_render_numeral_uses_strokes():
    assert render_numeral(3) == "1′′"
    assert parse_numeral("1''") == 3


def test_numeral_zero_rejected():
    with pytest.raises(ValueError):
        numeral(0)


def test_numeral_value_of_compound_is_none():
    assert numeral_value(Add(ONE, ONE)) is None


def test_eval_term_arithmetic():
    assert eval_term(Mul(numeral(3), Add(numeral(2), ONE))) == 9
    with pytest.raises(FreeVariablePresent):
        eval_term(Succ(Var("x")))


def test_instance_substitutes_bound_variable():
    f = All("x", eq(Var("x"), Var("y")))
    assert instance(f, 2) == eq(numeral(2), Var("y"))
    assert free_vars(f) == {"y"}


def test_substitution_avoids_capture():
    f = All("x", eq(Var("x"), Var("y")))
    g = substitute(f, "y", Var("x"))
    assert isinstance(g, All) and g.var != "x"
    assert free_vars(g) == {"x"}


def test_bound_variable_not_substituted():
    f = All("x", eq(Var("x"), ONE))
    assert substitute(f, "x", numeral(4)) == f


def test_fresh_var_avoids():
    assert fresh_var({"a", "a1"}) == "a2"
    assert fresh_var(set(), "b") == "b"


def test_depth_counts_primes_as_one():
    p = atom("p")
    assert formula_depth(p) == 1
    assert formula_depth(Neg(Meet(p, All("x", p)))) == 4




@pytest.mark.parametrize(
    "prime, truth",
    [
        (eq(Add(Var("a"), ONE), Add(ONE, Var("a"))), True),
        (eq(Succ(Var("a")), Var("a")), False),
        (eq(Var("a"), numeral(2)), None),
        (eq(numeral(2), Add(ONE, ONE)), True),
        (eq(Mul(Var("a"), Var("b")), Mul(Var("b"), Var("a"))), True),
    ],
)
def test_uniform_truth(prime, truth):
    assert uniform_truth(prime) is truth


@given(st.integers(1, 30), st.integers(1, 30))
def test_uniform_truth_agrees_with_instances(m, n):
    for prime in [eq(Add(Var("a"), Var("b")), Add(Var("b"), Var("a"))), eq(Succ(Var("a")), Var("a"))]:
        verdict = uniform_truth(prime)
        inst = substitute(substitute(prime, "a", numeral(m)), "b", numeral(n))
        assert uniform_truth(inst) is verdict


class TestOracles:
    def test_finite_preorder_is_reflexive_transitive(self):
        o = finite_preorder(["p", "q", "r"], [("p", "q"), ("q", "r")])
        p, q, r = map(atom, "pqr")
        assert o.basic(Sequent((p,), r))
        assert o.basic(Sequent((q,), q))
        assert not o.basic(Sequent((r,), p))

    def test_finite_preorder_has_no_extremal_relations(self):
        o = finite_preorder(["p"])
        assert not o.basic(Sequent((), atom("p")))
        assert not o.basic(Sequent((atom("p"),), None))
        assert not o.basic(Sequent((), None))

    def test_arithmetic_extremal_relations(self):
        o = arithmetic_oracle()
        true, false = eq(ONE, ONE), eq(ONE, numeral(2))
        assert o.basic(Sequent((), true))
        assert o.basic(Sequent((false,), None))
        assert o.basic(Sequent((false,), true))
        assert not o.basic(Sequent((true,), false))
        assert not o.basic(Sequent((), None))

    def test_arithmetic_uniform_basic(self):
        o = arithmetic_oracle()
        a = Var("a")
        assert o.basic_uniform(Sequent((eq(a, a),), eq(Add(a, ONE), Succ(a))))
        assert not o.basic_uniform(Sequent((eq(a, ONE),), eq(a, numeral(2))))

    def test_valuation_oracle(self):
        o = valuation_oracle({"p": True, "q": False})
        assert o.truth(atom("p")) is True
        assert o.truth(atom("q")) is False
        assert o.basic(Sequent((atom("q"),), atom("p")))

    def test_compound_formulas_are_never_basic(self):
        o = finite_preorder(["p"])
        p = atom("p")
        assert not o.basic(Sequent((Meet(p, p),), p))
        assert not o.basic(Sequent((p, p), p))


@pytest.mark.parametrize("n, count", [(1, 1), (2, 3), (3, 9)])
def test_preorders_up_to_isomorphism(n, count):
    # unlabeled preorder counts: 1, 3, 9
    assert len(enumerate_preorders(n)) == count


def test_random_preorder_is_closed():
    m = random_preorder(5, random.Random(3), 0.4)
    assert np.array_equal(transitive_closure(m), m)
    assert m.diagonal().all()


@given(formulas, terms)
def test_substitution_removes_the_variable(f, t):
    from omegaseq.terms import term_vars

    g = substitute(f, "y", t)
    assert "y" not in free_vars(g) or "y" in term_vars(t)
    assert free_vars(g) <= (free_vars(f) - {"y"}) | term_vars(t)
