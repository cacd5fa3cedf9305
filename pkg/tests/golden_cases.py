"""The displayed derivations rebuilt by the corresponding operations.

Run ``python tests/golden_cases.py`` to rewrite the golden files; the
acceptance and unit tests only ever read them.
"""

from pathlib import Path

from omegaseq.admissible import cut_zeta, derive_complete_induction, derive_prime_dne, invert_meet_right, refl
from omegaseq.derivation import instantiate, mk_basic, mk_d, mk_e
from omegaseq.terms import (
    All,
    Meet,
    Neg,
    Sequent,
    Succ,
    Var,
    arithmetic_oracle,
    atom,
    eq,
    finite_preorder,
    valuation_oracle,
)

GOLDEN = Path(__file__).parent / "golden"


def _refl_meet():
    return refl(Meet(atom("a"), atom("b"))), finite_preorder(["a", "b"])


def _refl_omega():
    return refl(All("x", eq(Var("x"), Var("x")))), arithmetic_oracle()


def _refl_neg():
    return refl(Neg(atom("a"))), finite_preorder(["a"])


def _gamma_e_rewrite():
    c1, c2 = atom("c1"), atom("c2")
    d = mk_e(mk_basic(Sequent((c1,), c2)), Meet(atom("a"), atom("b")))
    return invert_meet_right(d, "left"), finite_preorder(["a", "b", "c1", "c2"], [("c1", "c2")])


def _zeta_e_rewrite():
    a1, a2, b, c, d = map(atom, ["a1", "a2", "b", "c", "d"])
    d1 = mk_e(mk_basic(Sequent((a1,), a2)), b)
    d2 = mk_d(c, 1, mk_basic(Sequent((b,), d)))
    oracle = finite_preorder(["a1", "a2", "b", "c", "d"], [("a1", "a2"), ("b", "d")])
    return cut_zeta(d1, d2), oracle


def _dne_oracle():
    return valuation_oracle({"p": True, "q": False})


def _dne_true_prime():
    oracle = _dne_oracle()
    return derive_prime_dne(atom("p"), oracle), oracle


def _dne_false_prime():
    oracle = _dne_oracle()
    return derive_prime_dne(atom("q"), oracle), oracle


def induction_step():
    """The step a=a → a'=a' of a prime schema."""
    a = Var("a")
    return mk_basic(Sequent((eq(a, a),), eq(Succ(a), Succ(a))))


def _induction_node():
    return derive_complete_induction(induction_step()), arithmetic_oracle()


def _induction_m3():
    return instantiate(derive_complete_induction(induction_step()).branch, 3), arithmetic_oracle()


CASES = {
    "refl_meet": _refl_meet,
    "refl_omega": _refl_omega,
    "refl_neg": _refl_neg,
    "gamma_e_rewrite": _gamma_e_rewrite,
    "zeta_e_rewrite": _zeta_e_rewrite,
    "dne_true_prime": _dne_true_prime,
    "dne_false_prime": _dne_false_prime,
    "induction_node": _induction_node,
    "induction_m3": _induction_m3,
}


def golden_path(name: str) -> Path:
    return GOLDEN / f"{name}.proof"


if __name__ == "__main__":
    from omegaseq.derivation import check
    from omegaseq.formats import dump_derivation

    GOLDEN.mkdir(exist_ok=True)
    for name, build in CASES.items():
        d, oracle = build()
        check(d, oracle)
        golden_path(name).write_text(dump_derivation(d), encoding="utf-8")
        print(name)
