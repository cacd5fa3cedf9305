import random

import pytest

from omegaseq.derivation import Derivation, check
from omegaseq.formats import dump_derivation
from omegaseq.search import (
    DepthExceeded,
    SearchConfig,
    Underivable,
    cut_pairs,
    decide,
    generate_corpus,
    random_formula,
)
from omegaseq.terms import All, Meet, Neg, Sequent, Var, atom, eq, formula_depth, is_closed


def test_basic_sequent_is_found(pq, p, q):
    d = decide(Sequent((p,), q), pq)
    assert isinstance(d, Derivation)
    assert check(d, pq) == Sequent((p,), q)


def test_reverse_order_is_underivable(pq, p, q):
    assert decide(Sequent((q,), p), pq) is Underivable


def test_empty_sequent_is_underivable(pq, arith, val_tf):
    for oracle in (pq, arith, val_tf):
        assert decide(Sequent((), None), oracle) is Underivable


def test_antecedent_order_is_preserved(pq, p, q):
    s = Sequent((Neg(p), Meet(p, q)), None)
    d = decide(s, pq)
    assert isinstance(d, Derivation)
    assert check(d, pq) == s


def test_excluded_middle_negated(ab):
    a = atom("a")
    s = Sequent((), Neg(Meet(a, Neg(a))))
    assert check(decide(s, ab), ab) == s


def test_omega_succedent(arith):
    f = All("x", eq(Var("x"), Var("x")))
    assert check(decide(Sequent((), f), arith), arith) == Sequent((), f)


def test_depth_limit_reports_depth_exceeded(ab):
    a = atom("a")
    deep = Neg(Neg(Neg(Neg(Neg(Neg(a))))))
    assert decide(Sequent((deep,), deep), ab, SearchConfig(depth=1)) is DepthExceeded


def test_decide_is_deterministic(pq, p, q):
    s = Sequent((Neg(Neg(p)),), Neg(Neg(q)))
    a, b = decide(s, pq), decide(s, pq)
    assert dump_derivation(a) == dump_derivation(b)


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(omega_n=0)


def test_random_formula_respects_depth(pq):
    rng = random.Random(0)
    for _ in range(200):
        f = random_formula(rng, pq.carrier(), 3)
        assert formula_depth(f) <= 3
        assert is_closed(f)


def test_corpus_is_checked_and_reproducible(pq):
    a = generate_corpus(pq, count=30, seed=9)
    b = generate_corpus(pq, count=30, seed=9)
    assert [dump_derivation(d) for d in a] == [dump_derivation(d) for d in b]
    for d in a:
        check(d, pq)


def test_corpus_count_zero(pq):
    assert generate_corpus(pq, count=0) == []


def test_cut_pairs_share_the_middle(pq):
    for d1, d2 in cut_pairs(pq, count=10, seed=2):
        assert d2.conclusion.antecedent == (d1.conclusion.succedent,)
