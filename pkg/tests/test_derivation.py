import pytest

from omegaseq.derivation import (
    BasicNotInOracle,
    Derivation,
    OmegaBranch,
    ParameterEscape,
    RuleMismatch,
    adapt,
    check,
    instantiate,
    mk_a,
    mk_b,
    mk_basic,
    mk_c,
    mk_d,
    mk_e,
    mk_f,
    mk_g,
    mk_h,
    mk_i,
    mk_j,
    move,
    size,
    subst_derivation,
)
from omegaseq.terms import ONE, All, Meet, Neg, Sequent, Var, atom, eq, numeral


def basic(left, right):
    return mk_basic(Sequent(() if left is None else (left,), right))


class TestConstructors:
    def test_rule_a_requires_equal_antecedents(self, p, q):
        with pytest.raises(RuleMismatch):
            mk_a(basic(p, q), basic(q, q))

    def test_rule_a_builds_meet(self, pq, p, q):
        d = mk_a(basic(p, p), basic(p, q))
        assert d.conclusion == Sequent((p,), Meet(p, q))
        check(d, pq)

    def test_rule_b_moves_leading_formula(self, p):
        d = mk_b(mk_e(basic(p, p), None))
        assert d.conclusion == Sequent((Neg(p),), Neg(p))

    def test_rule_b_needs_empty_succedent(self, p):
        with pytest.raises(RuleMismatch):
            mk_b(basic(p, p))

    def test_rule_c_rejects_escaping_parameter(self):
        a = Var("a")
        body = mk_basic(Sequent((eq(a, a),), eq(a, a)))
        with pytest.raises(ParameterEscape):
            mk_c(All("x", eq(Var("x"), Var("x"))), OmegaBranch("a", body))

    def test_rule_e_appends_negation(self, p, q):
        d = mk_e(basic(p, q), atom("r"))
        assert d.conclusion == Sequent((p, Neg(q)), atom("r"))

    def test_rule_f_checks_instance(self, p):
        fam = All("x", eq(Var("x"), Var("x")))
        good = mk_basic(Sequent((eq(numeral(2), numeral(2)),), eq(ONE, ONE)))
        assert mk_f(fam, 2, good).conclusion.antecedent == (fam,)
        with pytest.raises(RuleMismatch):
            mk_f(fam, 3, good)

    def test_structural_rules(self, p, q):
        d = mk_d(q, 2, mk_d(p, 0, basic(p, q)))
        assert d.conclusion.antecedent == (p, p, q)
        assert mk_g(0, d).conclusion.antecedent == (p, q)
        assert mk_h(1, d).conclusion.antecedent == (p, q, p)
        assert mk_i(1, d).conclusion.antecedent == (p, Meet(p, q))
        with pytest.raises(RuleMismatch):
            mk_g(1, d)

    def test_insert_position_bounds(self, p):
        with pytest.raises(RuleMismatch):
            mk_d(p, 3, basic(p, p))


class TestCheck:
    def test_basic_outside_oracle(self, pq, p, q):
        with pytest.raises(BasicNotInOracle):
            check(basic(q, p), pq)

    def test_forged_rule_a_node_is_caught(self, pq, p, q):
        good = mk_a(basic(p, p), basic(p, q))
        forged = Derivation("a", good.conclusion, (good.premisses[0], basic(q, q)))
        with pytest.raises(RuleMismatch) as err:
            check(forged, pq)
        assert err.value.path == ()

    def test_nested_violation_reports_premiss_path(self, pq, p, q):
        bad = Derivation("h", Sequent((p,), q), (basic(p, q),), pos=0)
        with pytest.raises(RuleMismatch) as err:
            check(mk_d(q, 0, bad), pq)
        assert err.value.path == (0,)

    def test_unknown_rule(self, pq, p):
        with pytest.raises(RuleMismatch):
            check(Derivation("k", Sequent((p,), p)), pq)

    def test_empty_sequent_is_never_basic(self, pq):
        with pytest.raises((BasicNotInOracle, RuleMismatch)):
            check(Derivation("basic", Sequent((), None)), pq)

    def test_omega_body_checked_uniformly(self, arith):
        fam = All("x", eq(Var("x"), Var("x")))
        n = Var("n")
        body = mk_basic(Sequent((), eq(n, n)))
        d = mk_c(fam, OmegaBranch("n", body))
        assert check(d, arith) == Sequent((), fam)

    def test_omega_exception_must_match_instance(self, arith):
        fam = All("x", eq(Var("x"), Var("x")))
        body = mk_basic(Sequent((), eq(Var("n"), Var("n"))))
        wrong = mk_basic(Sequent((), eq(ONE, ONE)))
        with pytest.raises(RuleMismatch):
            mk_c(fam, OmegaBranch("n", body, {2: wrong}))


class TestOmegaBranches:
    def test_instantiate_prefers_exceptions(self):
        body = mk_basic(Sequent((), eq(Var("n"), Var("n"))))
        two = numeral(2)
        exc = mk_d(eq(ONE, ONE), 0, mk_basic(Sequent((), eq(two, two))))
        br = OmegaBranch("n", body, {2: exc})
        assert instantiate(br, 2) is exc
        assert instantiate(br, 3).conclusion == Sequent((), eq(numeral(3), numeral(3)))

    def test_substitution_resolves_j_node(self):
        n = Var("n")
        body = mk_basic(Sequent((), eq(n, n)))
        d = mk_j(OmegaBranch("n", body))
        assert d.conclusion == Sequent((), eq(n, n))
        out = subst_derivation(d, "n", numeral(4))
        assert out.rule == "basic"
        assert out.conclusion == Sequent((), eq(numeral(4), numeral(4)))

    def test_exceptions_are_sorted(self):
        body = mk_basic(Sequent((), eq(Var("n"), Var("n"))))
        excs = {k: mk_basic(Sequent((), eq(numeral(k), numeral(k)))) for k in (3, 1, 2)}
        br = OmegaBranch("n", body, excs)
        assert [k for k, _ in br.exceptions] == [1, 2, 3]


class TestPlumbing:
    def test_move_and_adapt(self, pq, p, q):
        r = atom("r")
        d = mk_d(r, 2, mk_d(q, 1, basic(p, q)))
        assert move(d, 0, 2).conclusion.antecedent == (q, r, p)
        a = adapt(d, (r, q, p, q))
        assert a.conclusion.antecedent == (r, q, p, q)
        check(a, finite_preorder_pqr())

    def test_adapt_contracts_duplicates(self, p, q):
        d = mk_d(p, 0, basic(p, q))
        assert adapt(d, (p,)).conclusion.antecedent == (p,)

    def test_size_counts_omega_bodies(self, arith):
        fam = All("x", eq(Var("x"), Var("x")))
        d = mk_c(fam, OmegaBranch("n", mk_basic(Sequent((), eq(Var("n"), Var("n"))))))
        assert size(d) == 2


def finite_preorder_pqr():
    from omegaseq.terms import finite_preorder

    return finite_preorder(["p", "q", "r"], [("p", "q")])
