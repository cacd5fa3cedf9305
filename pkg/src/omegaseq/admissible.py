"""Admissible rules as derivation-to-derivation transformers.

Every function here returns a derivation built from the primitive rules
only.  The recursions follow the shape of the cut formula (formula
induction) and the last rule of a premiss derivation (premiss induction);
nothing else bounds them.

ω-branches are transformed uniformly: the body once, each exception on its
own, and a recipe by wrapping it in a ``map`` recipe that applies the same
transformation to each generated premiss.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from typing import Callable, Optional, Union

from .derivation import (
    Derivation,
    DerivationError,
    OmegaBranch,
    Recipe,
    RecipeKind,
    RECIPES,
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
    mk_h,
    mk_i,
    mk_j,
    move,
    rebuild,
    register_recipe,
    rename_param,
    subst_derivation,
    weaken,
)
from .formats import show
from .terms import (
    All,
    Formula,
    Meet,
    Neg,
    PreorderOracle,
    Prime,
    Sequent,
    Succ,
    Term,
    Var,
    fresh_var,
    instance,
    numeral,
    subst_term,
    substitute,
    term_vars,
)

STRUCTURAL = ("d", "f", "g", "h", "i")


class TransformError(DerivationError):
    pass


class NotAMeetSuccedent(TransformError):
    pass


class NotANegSuccedent(TransformError):
    pass


class NotAnOmegaSuccedent(TransformError):
    pass


class ConclusionMismatch(TransformError):
    pass


class VariableNotFree(TransformError):
    pass


class ShapeMismatch(TransformError):
    pass


class OracleUndecided(TransformError):
    pass


# --- generic handling of j-nodes -------------------------------------------


def _subst_arg(a, v: str, t: Term):
    if isinstance(a, Derivation):
        return subst_derivation(a, v, t)
    if isinstance(a, Sequent):
        return a.substitute(v, t)
    if isinstance(a, (Prime, Meet, Neg, All)):
        return substitute(a, v, t)
    if isinstance(a, Recipe):
        return RECIPES[a.kind].subst(a, v, t)
    if isinstance(a, tuple):
        return tuple(_subst_arg(b, v, t) for b in a)
    if a is None or isinstance(a, (int, str, bool)):
        return a
    return subst_term(a, v, t)


@dataclass(frozen=True)
class _Op:
    run: Callable  # (derivation, *args) -> derivation
    conclusion: Callable  # (template sequent, *args) -> sequent


OPS: dict[str, _Op] = {}


def _map_j(d: Derivation, op: str, *args) -> Derivation:
    """Push transformation ``op`` through a j-node, premiss by premiss."""
    br = d.branch
    spec = OPS[op]
    exc = tuple(
        (n, spec.run(dn, *_subst_arg(args, br.param, numeral(n)))) for n, dn in br.exceptions
    )
    if br.body is not None:
        return mk_j(OmegaBranch(br.param, spec.run(br.body, *args), exc))
    template = spec.conclusion(br.recipe.template, *args)
    return mk_j(OmegaBranch(br.param, None, exc, Recipe("map", template, (op, br.recipe) + tuple(args))))


def _map_instance(recipe: Recipe, param: str, n: int) -> Derivation:
    op, inner, *args = recipe.args
    base = RECIPES[inner.kind].instance(inner, param, n)
    return OPS[op].run(base, *_subst_arg(tuple(args), param, numeral(n)))


def _map_subst(recipe: Recipe, v: str, t: Term) -> Recipe:
    op, inner, *args = recipe.args
    return Recipe(
        "map",
        recipe.template.substitute(v, t),
        (op, RECIPES[inner.kind].subst(inner, v, t)) + _subst_arg(tuple(args), v, t),
    )


def _map_validate(recipe: Recipe, param: str, oracle: PreorderOracle, path) -> None:
    op, inner, *args = recipe.args
    if op not in OPS:
        raise DerivationError(f"unknown map operation {op!r} at {path}")
    RECIPES[inner.kind].validate(inner, param, oracle, path + ("inner",))
    want = OPS[op].conclusion(inner.template, *args)
    if want != recipe.template:
        raise DerivationError(f"map recipe template {show(recipe.template)} is not {show(want)}")
    for a in args:
        if isinstance(a, Derivation):
            check(a, oracle)


register_recipe("map", RecipeKind(_map_instance, _map_subst, _map_validate))


# --- reflexivity -----------------------------------------------------------


def refl(f: Formula, oracle: Optional[PreorderOracle] = None) -> Derivation:
    """A derivation of f → f by formula induction."""
    match f:
        case Prime():
            if oracle is not None and not f.args and hasattr(oracle, "index") and f not in oracle.index:
                raise TransformError(f"{show(f)} is not in the oracle's carrier")
            return mk_basic(Sequent((f,), f))
        case Meet(a, b):
            left = mk_d(b, 1, refl(a, oracle))
            right = mk_d(a, 0, refl(b, oracle))
            return mk_i(0, mk_a(left, right))
        case Neg(a):
            return mk_b(mk_e(refl(a, oracle), None))
        case All():
            p = fresh_var(_vars_of(f), "n")
            body = mk_f(f, Var(p), refl(instance(f, Var(p)), oracle))
            return mk_c(f, OmegaBranch(p, body))
    raise TypeError(f)


def _vars_of(*items) -> set[str]:
    out: set[str] = set()
    for x in items:
        if isinstance(x, Derivation):
            x = x.conclusion
        if isinstance(x, Sequent):
            out |= x.all_vars()
        elif x is not None:
            out |= Sequent((x,), None).all_vars()
    return out


# --- inversions ------------------------------------------------------------


def invert_meet_right(d: Derivation, side: str = "left") -> Derivation:
    """From C→A∧B derive C→A (side='left') or C→B (side='right')."""
    succ = d.conclusion.succedent
    if not isinstance(succ, Meet):
        raise NotAMeetSuccedent(f"succedent of {show(d)} is not a meet")
    if side not in ("left", "right"):
        raise ValueError(side)
    match d.rule:
        case "a":
            return d.premisses[0 if side == "left" else 1]
        case "e":
            return mk_e(d.premiss, succ.left if side == "left" else succ.right)
        case "j":
            return _map_j(d, "invert_meet", side)
        case r if r in STRUCTURAL:
            return rebuild(d, invert_meet_right(d.premiss, side))
    raise TransformError(f"rule {d.rule} cannot conclude a meet succedent")


def invert_neg(d: Derivation) -> Derivation:
    """From C→¬A derive A,C→ (A in front)."""
    succ = d.conclusion.succedent
    if not isinstance(succ, Neg):
        raise NotANegSuccedent(f"succedent of {show(d)} is not a negation")
    a = succ.body
    match d.rule:
        case "b":
            return d.premiss
        case "e":
            return mk_d(a, 0, mk_e(d.premiss, None))
        case "d":
            return mk_d(d.formula, d.pos + 1, invert_neg(d.premiss))
        case "g" | "h" | "i":
            return rebuild_at(d, d.pos + 1, invert_neg(d.premiss))
        case "f":
            inner = mk_h(0, invert_neg(d.premiss))
            return mk_h(0, mk_f(d.formula, d.term, inner))
        case "j":
            return _map_j(d, "invert_neg")
    raise TransformError(f"rule {d.rule} cannot conclude a negated succedent")


def rebuild_at(d: Derivation, pos: int, premiss: Derivation) -> Derivation:
    from .derivation import mk_g

    return {"g": mk_g, "h": mk_h, "i": mk_i}[d.rule](pos, premiss)


def invert_omega(d: Derivation, n: Union[int, Term]) -> Derivation:
    """From C→(x)A(x) derive C→A(n)."""
    t = numeral(n) if isinstance(n, int) else n
    succ = d.conclusion.succedent
    if not isinstance(succ, All):
        raise NotAnOmegaSuccedent(f"succedent of {show(d)} is not an ω-meet")
    match d.rule:
        case "c":
            return instantiate(d.branch, t)
        case "e":
            return mk_e(d.premiss, instance(succ, t))
        case "j":
            return _map_j(d, "invert_omega", t)
        case r if r in STRUCTURAL:
            return rebuild(d, invert_omega(d.premiss, t))
    raise TransformError(f"rule {d.rule} cannot conclude an ω-meet succedent")


def weaken_right(d: Derivation, rhs: Optional[Formula]) -> Derivation:
    """From Γ→ (empty succedent) derive Γ→rhs."""
    if d.conclusion.succedent is not None:
        raise ShapeMismatch(f"{show(d)} has a succedent")
    match rhs:
        case None:
            return d
        case Meet(x, y):
            return mk_a(weaken_right(d, x), weaken_right(d, y))
        case Neg(x):
            return mk_b(mk_d(x, 0, d))
        case All():
            p = fresh_var(_vars_of(d, rhs), "n")
            return mk_c(rhs, OmegaBranch(p, weaken_right(d, instance(rhs, Var(p)))))
    return _weaken_right_prime(d, rhs)


def _weaken_right_prime(d: Derivation, rhs: Prime) -> Derivation:
    match d.rule:
        case "basic":
            return mk_basic(Sequent(d.conclusion.antecedent, rhs))
        case "e":
            return mk_e(d.premiss, rhs)
        case "j":
            return _map_j(d, "weaken_right", rhs)
        case r if r in STRUCTURAL:
            return rebuild(d, _weaken_right_prime(d.premiss, rhs))
    raise TransformError(f"rule {d.rule} cannot conclude an empty succedent")


# --- cut -------------------------------------------------------------------


def _rest(ant: tuple, marks: frozenset) -> tuple:
    return tuple(f for k, f in enumerate(ant) if k not in marks)


def _below(marks: Iterable[int], p: int) -> int:
    return sum(1 for m in marks if m < p)


def _cut(d1: Derivation, d2: Derivation, marks: frozenset) -> Derivation:
    """Cut the marked copies of d1's succedent out of d2's antecedent.

    Result antecedent: d2's unmarked entries followed by d1's antecedent.
    Keeping d1's context as a suffix leaves every position-0 rule of d2
    (b, f) in place.
    """
    delta = d1.conclusion.antecedent
    sigma = d2.conclusion.antecedent
    rhs = d2.conclusion.succedent
    if not marks:
        return weaken(d2, delta)
    rest = _rest(sigma, marks)
    target = rest + delta
    match d2.rule:
        case "basic":
            return _cut_prime(d1, d2)
        case "a":
            return mk_a(_cut(d1, d2.premisses[0], marks), _cut(d1, d2.premisses[1], marks))
        case "b":
            return mk_b(_cut(d1, d2.premiss, frozenset(m + 1 for m in marks)))
        case "c":
            br = d2.branch
            if br.param in d1.conclusion.free_vars():
                br = rename_param(br, fresh_var(_vars_of(d1, d2) | {br.param}, br.param))
            return mk_c(d2.formula, _map_branch(br, "cut", d1, tuple(sorted(marks))))
        case "j":
            return _map_j(d2, "cut", d1, tuple(sorted(marks)))
        case "d":
            p = d2.pos
            shifted = frozenset(m if m < p else m - 1 for m in marks if m != p)
            r = _cut(d1, d2.premiss, shifted)
            if p in marks:
                return r
            return mk_d(d2.formula, p - _below(marks, p), r)
        case "e":
            last = len(sigma) - 1
            prem = d2.premiss
            y = prem.conclusion.succedent
            if last not in marks:
                r = mk_e(_cut(d1, prem, marks), rhs)
                return move(r, len(target) - 1, len(rest) - 1)
            # principal: the marked ¬Y was introduced here
            ih = _cut(d1, prem, marks - {last})
            s = _cut(ih, invert_neg(d1), frozenset({0}))
            return weaken_right(adapt(s, target), rhs)
        case "f":
            prem = d2.premiss
            if 0 not in marks:
                return mk_f(d2.formula, d2.term, _cut(d1, prem, marks))
            ih = _cut(d1, prem, marks - {0})
            s = _cut(invert_omega(d1, d2.term), ih, frozenset({0}))
            return adapt(s, target)
        case "g":
            p = d2.pos
            shifted = {m if m <= p else m + 1 for m in marks}
            if p in marks:
                shifted.add(p + 1)
            r = _cut(d1, d2.premiss, frozenset(shifted))
            if p in marks:
                return r
            from .derivation import mk_g

            return mk_g(p - _below(marks, p), r)
        case "h":
            p = d2.pos
            swap = {p: p + 1, p + 1: p}
            r = _cut(d1, d2.premiss, frozenset(swap.get(m, m) for m in marks))
            if p in marks or p + 1 in marks:
                return r
            return mk_h(p - _below(marks, p), r)
        case "i":
            p = d2.pos
            shifted = frozenset(m if m < p else m + 1 for m in marks if m != p)
            q = p - _below(marks, p)
            if p not in marks:
                return mk_i(q, _cut(d1, d2.premiss, shifted))
            ih = _cut(d1, d2.premiss, shifted)
            s1 = _cut(invert_meet_right(d1, "left"), ih, frozenset({q}))
            s2 = _cut(invert_meet_right(d1, "right"), s1, frozenset({q}))
            return adapt(s2, target)
    raise TransformError(f"cut: unexpected rule {d2.rule}")


def _cut_prime(d1: Derivation, d2: Derivation) -> Derivation:
    """d2 is basic B→D with B prime: premiss induction on d1 (Δ→B)."""
    rhs = d2.conclusion.succedent
    match d1.rule:
        case "basic":
            return mk_basic(Sequent(d1.conclusion.antecedent, rhs))
        case "e":
            return mk_e(d1.premiss, rhs)
        case "j":
            return _map_j(d1, "cut_prime", d2)
        case r if r in STRUCTURAL:
            return rebuild(d1, _cut_prime(d1.premiss, d2))
    raise TransformError(f"rule {d1.rule} cannot conclude a prime succedent")


def _map_branch(br: OmegaBranch, op: str, *args) -> OmegaBranch:
    spec = OPS[op]
    exc = tuple((n, spec.run(dn, *args)) for n, dn in br.exceptions)
    if br.body is not None:
        return OmegaBranch(br.param, spec.run(br.body, *args), exc)
    template = spec.conclusion(br.recipe.template, *args)
    return OmegaBranch(br.param, None, exc, Recipe("map", template, (op, br.recipe) + tuple(args)))


def cut_zeta(d1: Derivation, d2: Derivation, marks: Optional[Iterable[int]] = None) -> Derivation:
    """From Δ→B and a derivation whose antecedent holds marked copies of B, derive Δ,rest→D.

    ``marks`` defaults to every position of B in d2's antecedent.
    """
    b = d1.conclusion.succedent
    sigma = d2.conclusion.antecedent
    if b is None:
        raise ConclusionMismatch(f"{show(d1)} has no succedent to cut")
    marks = frozenset(k for k, f in enumerate(sigma) if f == b) if marks is None else frozenset(marks)
    for m in marks:
        if not 0 <= m < len(sigma) or sigma[m] != b:
            raise ConclusionMismatch(f"position {m} of {show(d2)} is not {show(b)}")
    delta = d1.conclusion.antecedent
    if not marks:
        return weaken(d2, delta, 0)
    r = _cut(d1, d2, marks)
    return permute(r, delta + _rest(sigma, marks))


def permute(d: Derivation, target: tuple) -> Derivation:
    ant = list(d.conclusion.antecedent)
    if sorted(map(show, ant)) != sorted(map(show, target)):
        raise DerivationError("permute: target is not a permutation")
    for k, f in enumerate(target):
        j = next(j for j in range(k, len(ant)) if ant[j] == f)
        d = move(d, j, k)
        ant.insert(k, ant.pop(j))
    return d


def cut(d1: Derivation, d2: Derivation) -> Derivation:
    """From A→B and B→C derive A→C."""
    b = d1.conclusion.succedent
    if b is None or d2.conclusion.antecedent != (b,):
        raise ConclusionMismatch(f"cannot cut {show(d1)} against {show(d2)}")
    return _cut(d1, d2, frozenset({0}))


def _cut_conclusion(template: Sequent, d1: Derivation, marks) -> Sequent:
    return Sequent(_rest(template.antecedent, marks) + d1.conclusion.antecedent, template.succedent)


OPS.update(
    {
        "cut": _Op(lambda d, d1, marks: _cut(d1, d, frozenset(marks)), _cut_conclusion),
        "cut_prime": _Op(
            lambda d, d2: _cut_prime(d, d2),
            lambda t, d2: Sequent(t.antecedent, d2.conclusion.succedent),
        ),
        "invert_meet": _Op(
            invert_meet_right,
            lambda t, side: Sequent(t.antecedent, t.succedent.left if side == "left" else t.succedent.right),
        ),
        "invert_neg": _Op(invert_neg, lambda t: Sequent((t.succedent.body,) + t.antecedent, None)),
        "invert_omega": _Op(invert_omega, lambda t, n: Sequent(t.antecedent, instance(t.succedent, n))),
        "weaken_right": _Op(weaken_right, lambda t, rhs: Sequent(t.antecedent, rhs)),
    }
)


# --- free variables and complete induction ---------------------------------


def substitute_freevar(d: Derivation, n: Union[int, Term], var: Optional[str] = None) -> Derivation:
    """From A(a) derive A(n); a j-node on ``a`` yields its n-th premiss directly."""
    fv = d.conclusion.free_vars()
    if var is None:
        if len(fv) != 1:
            raise VariableNotFree(f"{show(d)} has free variables {sorted(fv)}; name the one to replace")
        (var,) = fv
    if var not in fv:
        raise VariableNotFree(f"{var!r} is not free in {show(d)}")
    t = numeral(n) if isinstance(n, int) else n
    return subst_derivation(d, var, t)


def _step_shape(d: Derivation) -> tuple[str, Formula]:
    s = d.conclusion
    if len(s.antecedent) != 1 or s.succedent is None:
        raise ShapeMismatch(f"{show(d)} is not of the form A(a)→A(a')")
    f = s.antecedent[0]
    for v in sorted(Sequent((f,), None).free_vars()):
        if substitute(f, v, Succ(Var(v))) == s.succedent:
            return v, f
    raise ShapeMismatch(f"{show(d)} is not of the form A(a)→A(a')")


def induction_chain(step: Derivation, var: str, m: int) -> Derivation:
    """A(1)→A(m) by (m-1)-fold chaining of the step instances with cut."""
    _, f = _step_shape(step)
    if m == 1:
        return refl(substitute(f, var, numeral(1)))
    chain = subst_derivation(step, var, numeral(1))
    for i in range(2, m):
        chain = cut(chain, subst_derivation(step, var, numeral(i)))
    return chain


def derive_complete_induction(d: Derivation, param: Optional[str] = None) -> Derivation:
    """From A(a)→A(a') derive A(1)→A(b) as a j-node whose m-th premiss is the cut chain."""
    var, f = _step_shape(d)
    b = param or fresh_var(d.conclusion.all_vars() | {var}, "b")
    if b == var or b in d.conclusion.free_vars():
        raise ShapeMismatch(f"parameter {b!r} is not fresh")
    template = Sequent((substitute(f, var, numeral(1)),), substitute(f, var, Var(b)))
    return mk_j(OmegaBranch(b, None, (), Recipe("induction", template, (var, d))))


def _induction_instance(recipe: Recipe, param: str, n: int) -> Derivation:
    var, step = recipe.args
    return induction_chain(step, var, n)


def _induction_subst(recipe: Recipe, v: str, t: Term) -> Recipe:
    var, step = recipe.args
    template = recipe.template.substitute(v, t)
    if v == var:
        return Recipe("induction", template, recipe.args)
    if var in term_vars(t):
        new = fresh_var(step.conclusion.all_vars() | term_vars(t) | {v}, var)
        step = subst_derivation(step, var, Var(new))
        var = new
    return Recipe("induction", template, (var, subst_derivation(step, v, t)))


def _induction_validate(recipe: Recipe, param: str, oracle: PreorderOracle, path) -> None:
    var, step = recipe.args
    found_var, f = _step_shape(step)
    if substitute(f, var, Succ(Var(var))) != step.conclusion.succedent:
        raise ShapeMismatch(f"induction variable {var!r} does not match the step {show(step)}")
    want = Sequent((substitute(f, var, numeral(1)),), substitute(f, var, Var(param)))
    if want != recipe.template:
        raise ShapeMismatch(f"induction template {show(recipe.template)} is not {show(want)}")
    check(step, oracle)


register_recipe("induction", RecipeKind(_induction_instance, _induction_subst, _induction_validate))


# --- double negation -------------------------------------------------------


def derive_prime_dne(p: Prime, oracle: PreorderOracle) -> Derivation:
    """¬¬p→p from whichever of →p, p→ the oracle grants."""
    truth = oracle.uniform_truth(p)
    nnp = Neg(Neg(p))
    if truth is True:
        return mk_d(nnp, 0, mk_basic(Sequent((), p)))
    if truth is False:
        return mk_e(mk_b(mk_basic(Sequent((p,), None))), p)
    raise OracleUndecided(f"oracle decides neither →{show(p)} nor {show(p)}→")


def double_negate(d: Derivation) -> Derivation:
    """From X→Y derive ¬¬X→¬¬Y."""
    return mk_b(mk_e(mk_b(mk_e(d, None)), None))


def derive_dne(f: Formula, oracle: PreorderOracle) -> Derivation:
    """¬¬f→f by formula induction; intermediate cuts are eliminated on the way."""
    match f:
        case Prime():
            return derive_prime_dne(f, oracle)
        case Neg(a):
            inner = mk_b(mk_h(0, mk_e(refl(a), None)))
            return mk_b(mk_e(inner, None))
        case Meet(a, b):
            left = mk_i(0, mk_d(b, 1, refl(a)))
            right = mk_i(0, mk_d(a, 0, refl(b)))
            return mk_a(
                cut(double_negate(left), derive_dne(a, oracle)),
                cut(double_negate(right), derive_dne(b, oracle)),
            )
        case All():
            p = fresh_var(_vars_of(f), "n")
            body = instance(f, Var(p))
            proj = mk_f(f, Var(p), refl(body))
            return mk_c(f, OmegaBranch(p, cut(double_negate(proj), derive_dne(body, oracle))))
    raise TypeError(f)


# --- proof scripts ---------------------------------------------------------


def script_handlers(oracle: Optional[PreorderOracle] = None) -> dict:
    """Readers for the admissible-rule tags of a proof script.

    Each tag is compiled away on reading, so the resulting tree uses
    primitive rules only.
    """
    from .formats import FormatError, derivation_from_sexpr, formula_from_sexpr, term_from_sexpr
    from .sexpr import Sym, dumps

    def sub(x, path, k, handlers):
        return derivation_from_sexpr(x[k], path + (k - 1,), handlers)

    def arity(x, n):
        if len(x) != n + 1:
            raise FormatError(f"{x[0]} takes {n} arguments: {dumps(x)[:60]}")

    def need_oracle():
        if oracle is None:
            raise FormatError("dne needs an oracle")
        return oracle

    def k(x, path):
        arity(x, 2)
        return cut(sub(x, path, 1, h), sub(x, path, 2, h))

    def side(which):
        def run(x, path):
            arity(x, 1)
            return invert_meet_right(sub(x, path, 1, h), which)

        return run

    def n(x, path):
        arity(x, 1)
        return invert_neg(sub(x, path, 1, h))

    def o(x, path):
        arity(x, 2)
        return invert_omega(sub(x, path, 2, h), term_from_sexpr(x[1]))

    def p(x, path):
        if len(x) == 4:
            if not isinstance(x[1], Sym):
                raise FormatError(f"expected a variable, found {dumps(x[1])}")
            return substitute_freevar(sub(x, path, 3, h), term_from_sexpr(x[2]), x[1].name)
        arity(x, 2)
        return substitute_freevar(sub(x, path, 2, h), term_from_sexpr(x[1]))

    def q(x, path):
        arity(x, 1)
        return derive_complete_induction(sub(x, path, 1, h))

    def refl_(x, path):
        arity(x, 1)
        return refl(formula_from_sexpr(x[1]))

    def dne(x, path):
        arity(x, 1)
        return derive_dne(formula_from_sexpr(x[1]), need_oracle())

    def zeta(x, path):
        arity(x, 3)
        if not isinstance(x[1], list) or not all(isinstance(m, int) for m in x[1]):
            raise FormatError(f"zeta marks are a list of positions, found {dumps(x[1])}")
        return cut_zeta(sub(x, path, 2, h), sub(x, path, 3, h), x[1])

    h = {"k": k, "l": side("left"), "m": side("right"), "n": n, "o": o, "p": p, "q": q,
         "refl": refl_, "dne": dne, "zeta": zeta}
    return h


def load_script(text: str, oracle: Optional[PreorderOracle] = None) -> Derivation:
    """Read ``(script D)`` or ``(proof D)`` and compile every admissible tag away."""
    from .formats import FormatError, derivation_from_sexpr
    from .sexpr import loads

    x = loads(text)
    if not (isinstance(x, list) and len(x) == 2 and getattr(x[0], "name", None) in ("script", "proof")):
        raise FormatError("expected (script D) or (proof D)")
    return derivation_from_sexpr(x[1], (), script_handlers(oracle))
