"""Finitely represented derivations for the primitive rules and the checker.

Antecedents are flat tuples; a ``Meet`` inside an antecedent is one entry.
Rule schemata (positions are 0-based antecedent indices)::

    basic  oracle-given, antecedent length <= 1, all primes
    a      Γ→A, Γ→B           ⟹ Γ→A∧B
    b      [A]+Γ→             ⟹ Γ→¬A
    c      Γ→A(n) for all n   ⟹ Γ→(x)A(x)
    d      Γ→C                ⟹ Γ with B inserted at pos → C
    e      Γ→B                ⟹ Γ+[¬B]→C   (C arbitrary, possibly absent)
    f      [A(t)]+Γ→C         ⟹ [(x)A(x)]+Γ→C
    g      Γ with Γ[pos]=Γ[pos+1] ⟹ Γ without entry pos+1
    h      swap entries pos, pos+1
    i      entries pos, pos+1 packed into Meet(Γ[pos], Γ[pos+1])
    j      S(n) for all n     ⟹ S(a)

The premiss family of ``c`` and ``j`` is an :class:`OmegaBranch`: a body
derivation in which the parameter is an opaque term, a finite table of
exceptions, or a recipe that builds the n-th premiss on demand.
"""

from __future__ import annotations

from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .terms import (
    All,
    Formula,
    Meet,
    Neg,
    PreorderOracle,
    Prime,
    Sequent,
    Term,
    Var,
    basic_shape,
    fresh_var,
    instance,
    numeral,
    numeral_value,
    subst_term,
    substitute,
    term_vars,
)

PRIMITIVE_RULES = ("basic", "a", "b", "c", "d", "e", "f", "g", "h", "i", "j")


class DerivationError(ValueError):
    pass


class RuleMismatch(DerivationError):
    def __init__(self, path, expected: str, found: str):
        super().__init__(f"rule mismatch at {format_path(path)}: expected {expected}; found {found}")
        self.path = tuple(path)
        self.expected = expected
        self.found = found


class BasicNotInOracle(DerivationError):
    def __init__(self, sequent: Sequent, path=()):
        super().__init__(f"not a basic relation at {format_path(path)}: {_show(sequent)}")
        self.sequent = sequent
        self.path = tuple(path)


class ParameterEscape(DerivationError):
    def __init__(self, param: str, path=()):
        super().__init__(f"ω-parameter {param!r} occurs in the conclusion at {format_path(path)}")
        self.param = param
        self.path = tuple(path)


def format_path(path) -> str:
    return "/" + "/".join(str(p) for p in path) if path else "root"


@dataclass(frozen=True)
class Recipe:
    """A registered construction of the n-th premiss; ``template`` is the premiss at the parameter."""

    kind: str
    template: Sequent
    args: tuple = ()


@dataclass(frozen=True)
class OmegaBranch:
    param: str
    body: Optional["Derivation"] = None
    exceptions: tuple = ()  # sorted ((n, Derivation), ...)
    recipe: Optional[Recipe] = None

    def __post_init__(self):
        if (self.body is None) == (self.recipe is None):
            raise ValueError("an ω-branch has exactly one of body or recipe")
        exc = self.exceptions
        if isinstance(exc, dict):
            exc = exc.items()
        object.__setattr__(self, "exceptions", tuple(sorted(exc, key=lambda kv: kv[0])))

    @property
    def exception_map(self) -> dict:
        return dict(self.exceptions)

    @property
    def template(self) -> Sequent:
        return self.body.conclusion if self.body is not None else self.recipe.template


@dataclass(frozen=True)
class Derivation:
    rule: str
    conclusion: Sequent
    premisses: tuple = ()
    branch: Optional[OmegaBranch] = None
    formula: Optional[Formula] = None  # d: inserted formula; e: right side; c, f: the ω-meet
    pos: Optional[int] = None  # d, g, h, i
    term: Optional[Term] = None  # f: witness
    _hash: int = field(default=0, compare=False, repr=False)

    def __hash__(self):
        if not self._hash:
            h = hash((self.rule, self.conclusion, self.premisses, self.branch, self.formula, self.pos, self.term))
            object.__setattr__(self, "_hash", h or 1)
        return self._hash

    @property
    def premiss(self) -> "Derivation":
        return self.premisses[0]


# --- recipes ---------------------------------------------------------------


@dataclass(frozen=True)
class RecipeKind:
    instance: Callable  # (recipe, param, n: int) -> Derivation
    subst: Callable  # (recipe, v, t) -> Recipe
    validate: Callable  # (recipe, param, oracle, path) -> None


RECIPES: dict[str, RecipeKind] = {}


def register_recipe(kind: str, spec: RecipeKind) -> None:
    RECIPES[kind] = spec


# --- constructors ----------------------------------------------------------


def _show(x) -> str:
    from .formats import show

    return show(x)


def mk_basic(s: Sequent) -> Derivation:
    if basic_shape(s) is None:
        raise RuleMismatch((), "prime sequent with antecedent length <= 1", _show(s))
    return Derivation("basic", s)


def mk_a(d1: Derivation, d2: Derivation) -> Derivation:
    s1, s2 = d1.conclusion, d2.conclusion
    if s1.antecedent != s2.antecedent:
        raise RuleMismatch((), "premisses with identical antecedents", f"{_show(s1)} and {_show(s2)}")
    if s1.succedent is None or s2.succedent is None:
        raise RuleMismatch((), "premisses with present succedents", f"{_show(s1)} and {_show(s2)}")
    return Derivation("a", Sequent(s1.antecedent, Meet(s1.succedent, s2.succedent)), (d1, d2))


def mk_b(d: Derivation) -> Derivation:
    s = d.conclusion
    if not s.antecedent or s.succedent is not None:
        raise RuleMismatch((), "premiss A,C→ with empty succedent", _show(s))
    return Derivation("b", Sequent(s.antecedent[1:], Neg(s.antecedent[0])), (d,))


def _branch_checks(branch: OmegaBranch, template: Sequent, path=()) -> None:
    if branch.body is not None and branch.body.conclusion != template:
        raise RuleMismatch(path + ("body",), _show(template), _show(branch.body.conclusion))
    if branch.recipe is not None and branch.recipe.template != template:
        raise RuleMismatch(path + ("recipe",), _show(template), _show(branch.recipe.template))
    for n, dn in branch.exceptions:
        want = template.substitute(branch.param, numeral(n))
        if dn.conclusion != want:
            raise RuleMismatch(path + (f"exc{n}",), _show(want), _show(dn.conclusion))


def mk_c(formula: All, branch: OmegaBranch) -> Derivation:
    if not isinstance(formula, All):
        raise RuleMismatch((), "an ω-meet", _show(formula))
    ctx = branch.template.antecedent
    conclusion = Sequent(ctx, formula)
    if branch.param in conclusion.free_vars():
        raise ParameterEscape(branch.param)
    _branch_checks(branch, Sequent(ctx, instance(formula, Var(branch.param))))
    return Derivation("c", conclusion, branch=branch, formula=formula)


def mk_d(formula: Formula, pos: int, d: Derivation) -> Derivation:
    ant = d.conclusion.antecedent
    if not 0 <= pos <= len(ant):
        raise RuleMismatch((), f"insert position within 0..{len(ant)}", str(pos))
    return Derivation(
        "d", Sequent(ant[:pos] + (formula,) + ant[pos:], d.conclusion.succedent), (d,), formula=formula, pos=pos
    )


def mk_e(d: Derivation, rhs: Optional[Formula] = None) -> Derivation:
    s = d.conclusion
    if s.succedent is None:
        raise RuleMismatch((), "premiss A→B with present succedent", _show(s))
    return Derivation("e", Sequent(s.antecedent + (Neg(s.succedent),), rhs), (d,), formula=rhs)


def mk_f(formula: All, witness: Union[Term, int], d: Derivation) -> Derivation:
    if isinstance(witness, int):
        witness = numeral(witness)
    s = d.conclusion
    if not isinstance(formula, All):
        raise RuleMismatch((), "an ω-meet", _show(formula))
    if not s.antecedent or s.antecedent[0] != instance(formula, witness):
        raise RuleMismatch((), f"leading antecedent {_show(instance(formula, witness))}", _show(s))
    return Derivation(
        "f", Sequent((formula,) + s.antecedent[1:], s.succedent), (d,), formula=formula, term=witness
    )


def mk_g(pos: int, d: Derivation) -> Derivation:
    ant = d.conclusion.antecedent
    if not (0 <= pos < len(ant) - 1 and ant[pos] == ant[pos + 1]):
        raise RuleMismatch((), f"equal adjacent entries at {pos}, {pos + 1}", _show(d.conclusion))
    return Derivation("g", Sequent(ant[: pos + 1] + ant[pos + 2 :], d.conclusion.succedent), (d,), pos=pos)


def mk_h(pos: int, d: Derivation) -> Derivation:
    ant = d.conclusion.antecedent
    if not 0 <= pos < len(ant) - 1:
        raise RuleMismatch((), f"adjacent entries at {pos}, {pos + 1}", _show(d.conclusion))
    swapped = ant[:pos] + (ant[pos + 1], ant[pos]) + ant[pos + 2 :]
    return Derivation("h", Sequent(swapped, d.conclusion.succedent), (d,), pos=pos)


def mk_i(pos: int, d: Derivation) -> Derivation:
    ant = d.conclusion.antecedent
    if not 0 <= pos < len(ant) - 1:
        raise RuleMismatch((), f"adjacent entries at {pos}, {pos + 1}", _show(d.conclusion))
    packed = ant[:pos] + (Meet(ant[pos], ant[pos + 1]),) + ant[pos + 2 :]
    return Derivation("i", Sequent(packed, d.conclusion.succedent), (d,), pos=pos)


def mk_j(branch: OmegaBranch) -> Derivation:
    template = branch.template
    _branch_checks(branch, template)
    return Derivation("j", template, branch=branch)


def rebuild(d: Derivation, premiss: Derivation) -> Derivation:
    """Re-apply a one-premiss structural rule of ``d`` (b, d, e, f, g, h, i) to a new premiss."""
    match d.rule:
        case "b":
            return mk_b(premiss)
        case "d":
            return mk_d(d.formula, d.pos, premiss)
        case "e":
            return mk_e(premiss, d.formula)
        case "f":
            return mk_f(d.formula, d.term, premiss)
        case "g":
            return mk_g(d.pos, premiss)
        case "h":
            return mk_h(d.pos, premiss)
        case "i":
            return mk_i(d.pos, premiss)
    raise ValueError(f"rule {d.rule} is not a one-premiss structural rule")


# --- ω-branches ------------------------------------------------------------


def instantiate(branch: OmegaBranch, n: Union[int, Term]) -> Derivation:
    """The premiss of an ω-node at ``n`` (a numeral value or a term)."""
    t = numeral(n) if isinstance(n, int) else n
    value = numeral_value(t)
    if value is not None:
        exc = branch.exception_map.get(value)
        if exc is not None:
            return exc
    if branch.body is not None:
        return subst_derivation(branch.body, branch.param, t)
    if value is None:
        raise DerivationError(f"recipe branches only instantiate at numerals, got {_show(t)}")
    return RECIPES[branch.recipe.kind].instance(branch.recipe, branch.param, value)


def derivation_vars(d: Derivation) -> frozenset[str]:
    return d.conclusion.all_vars()


def subst_derivation(d: Derivation, v: str, t: Term) -> Derivation:
    """Substitute ``t`` for free ``v`` throughout ``d``; a j-node on ``v`` is replaced by its premiss."""
    tv = term_vars(t)
    if d.rule == "j" and d.branch.param == v:
        return instantiate(d.branch, t)
    concl = d.conclusion.substitute(v, t)
    formula = None if d.formula is None else substitute(d.formula, v, t)
    term = None if d.term is None else subst_term(d.term, v, t)
    prem = tuple(subst_derivation(p, v, t) for p in d.premisses)
    branch = d.branch
    if branch is not None:
        branch = _subst_branch(d.rule, branch, v, t, tv)
    return Derivation(d.rule, concl, prem, branch, formula, d.pos, term)


def _subst_branch(rule: str, br: OmegaBranch, v: str, t: Term, tv) -> OmegaBranch:
    if rule == "c":
        if br.param == v:
            exc = tuple((n, subst_derivation(dn, v, t)) for n, dn in br.exceptions)
            return replace(br, exceptions=exc)
        if br.param in tv:
            br = rename_param(br, fresh_var(tv | {v} | br.template.all_vars(), br.param))
        exc = tuple((n, subst_derivation(dn, v, t)) for n, dn in br.exceptions)
        if br.body is not None:
            return OmegaBranch(br.param, subst_derivation(br.body, v, t), exc)
        return OmegaBranch(br.param, None, exc, RECIPES[br.recipe.kind].subst(br.recipe, v, t))
    # j: the parameter is itself free in the conclusion, so nothing is bound
    exc = tuple(
        (n, subst_derivation(dn, v, subst_term(t, br.param, numeral(n)))) for n, dn in br.exceptions
    )
    if br.body is not None:
        return OmegaBranch(br.param, subst_derivation(br.body, v, t), exc)
    return OmegaBranch(br.param, None, exc, RECIPES[br.recipe.kind].subst(br.recipe, v, t))


def rename_param(br: OmegaBranch, new: str) -> OmegaBranch:
    if new == br.param:
        return br
    if br.body is not None:
        return OmegaBranch(new, subst_derivation(br.body, br.param, Var(new)), br.exceptions)
    return OmegaBranch(new, None, br.exceptions, RECIPES[br.recipe.kind].subst(br.recipe, br.param, Var(new)))


# --- checking --------------------------------------------------------------


def check(d: Derivation, oracle: PreorderOracle, audit: int = 3) -> Sequent:
    """Verify every node of ``d`` against its schema and return the conclusion.

    Free variables are opaque: a basic leaf mentioning one must hold for all
    of its values (``oracle.basic_uniform``).  Recipe-backed ω-branches are
    verified through their generating data and the first ``audit`` instances.
    """
    _check(d, oracle, (), audit)
    return d.conclusion


def _mismatch(path, expected, found):
    raise RuleMismatch(path, expected, _show(found) if not isinstance(found, str) else found)


def _check(d: Derivation, oracle: PreorderOracle, path: tuple, audit: int) -> None:
    s = d.conclusion
    rule = d.rule
    if rule not in PRIMITIVE_RULES:
        _mismatch(path, "a primitive rule", rule)
    arity = {"basic": 0, "a": 2, "c": 0, "j": 0}.get(rule, 1)
    if len(d.premisses) != arity:
        _mismatch(path, f"{arity} premisses for rule {rule}", f"{len(d.premisses)}")
    for k, p in enumerate(d.premisses):
        _check(p, oracle, path + (k,), audit)
    prem = [p.conclusion for p in d.premisses]
    ant, succ = s.antecedent, s.succedent

    if rule == "basic":
        if basic_shape(s) is None:
            _mismatch(path, "prime sequent with antecedent length <= 1", s)
        ok = oracle.basic_uniform(s) if s.free_vars() else oracle.basic(s)
        if not ok:
            raise BasicNotInOracle(s, path)
    elif rule == "a":
        p1, p2 = prem
        if not (p1.antecedent == p2.antecedent == ant):
            _mismatch(path, "rule a: identical antecedents in premisses and conclusion", s)
        if succ != Meet(p1.succedent, p2.succedent) or p1.succedent is None or p2.succedent is None:
            _mismatch(path, "rule a: succedent is the meet of the premiss succedents", s)
    elif rule == "b":
        (p,) = prem
        if p.succedent is not None or not p.antecedent or p.antecedent[1:] != ant or succ != Neg(p.antecedent[0]):
            _mismatch(path, "rule b: A,C→ over C→¬A", s)
    elif rule == "d":
        (p,) = prem
        k = d.pos
        if k is None or not 0 <= k < len(ant) or ant[:k] + ant[k + 1 :] != p.antecedent or succ != p.succedent:
            _mismatch(path, "rule d: one inserted antecedent entry", s)
        if ant[k] != d.formula:
            _mismatch(path, "rule d: recorded formula at the inserted position", s)
    elif rule == "e":
        (p,) = prem
        if p.succedent is None or ant != p.antecedent + (Neg(p.succedent),) or succ != d.formula:
            _mismatch(path, "rule e: A→B over A,¬B→C", s)
    elif rule == "f":
        (p,) = prem
        f = d.formula
        if not isinstance(f, All) or d.term is None:
            _mismatch(path, "rule f: ω-meet and witness annotations", s)
        if (
            not ant
            or ant[0] != f
            or not p.antecedent
            or p.antecedent[0] != instance(f, d.term)
            or p.antecedent[1:] != ant[1:]
            or p.succedent != succ
        ):
            _mismatch(path, "rule f: A(n),B→C over (x)A(x),B→C", s)
    elif rule in ("g", "h", "i"):
        (p,) = prem
        k, pa = d.pos, p.antecedent
        if k is None or not 0 <= k < len(pa) - 1 or p.succedent != succ:
            _mismatch(path, f"rule {rule}: adjacent positions {k}, {k}+1 in the premiss", s)
        if rule == "g":
            want = pa[: k + 1] + pa[k + 2 :] if pa[k] == pa[k + 1] else None
        elif rule == "h":
            want = pa[:k] + (pa[k + 1], pa[k]) + pa[k + 2 :]
        else:
            want = pa[:k] + (Meet(pa[k], pa[k + 1]),) + pa[k + 2 :]
        if ant != want:
            _mismatch(path, f"rule {rule} applied at {k}", s)
    elif rule == "c":
        f, br = d.formula, d.branch
        if not isinstance(f, All) or br is None or succ != f:
            _mismatch(path, "rule c: conclusion C→(x)A(x) with an ω-branch", s)
        if br.param in s.free_vars():
            raise ParameterEscape(br.param, path)
        _check_branch(br, Sequent(ant, instance(f, Var(br.param))), oracle, path, audit)
    elif rule == "j":
        br = d.branch
        if br is None:
            _mismatch(path, "rule j: an ω-branch", s)
        _check_branch(br, s, oracle, path, audit)


def _check_branch(br: OmegaBranch, template: Sequent, oracle, path, audit) -> None:
    if br.body is not None:
        if br.body.conclusion != template:
            _mismatch(path + ("body",), _show(template), br.body.conclusion)
        _check(br.body, oracle, path + ("body",), audit)
    else:
        if br.recipe.template != template:
            _mismatch(path + ("recipe",), _show(template), br.recipe.template)
        kind = RECIPES.get(br.recipe.kind)
        if kind is None:
            _mismatch(path + ("recipe",), "a registered recipe kind", br.recipe.kind)
        kind.validate(br.recipe, br.param, oracle, path + ("recipe",))
        for n in range(1, audit + 1):
            if n in br.exception_map:
                continue
            inst = kind.instance(br.recipe, br.param, n)
            want = template.substitute(br.param, numeral(n))
            if inst.conclusion != want:
                _mismatch(path + (f"inst{n}",), _show(want), inst.conclusion)
            _check(inst, oracle, path + (f"inst{n}",), audit)
    for n, dn in br.exceptions:
        want = template.substitute(br.param, numeral(n))
        if dn.conclusion != want:
            _mismatch(path + (f"exc{n}",), _show(want), dn.conclusion)
        _check(dn, oracle, path + (f"exc{n}",), audit)


# --- traversal -------------------------------------------------------------


def walk(d: Derivation, path: tuple = ()) -> Iterator[tuple[tuple, Derivation]]:
    """Every node, including ω-bodies and exceptions (recipes are not expanded)."""
    stack = [(path, d)]
    while stack:
        p, node = stack.pop()
        yield p, node
        for k, q in enumerate(node.premisses):
            stack.append((p + (k,), q))
        if node.branch is not None:
            if node.branch.body is not None:
                stack.append((p + ("body",), node.branch.body))
            for n, dn in node.branch.exceptions:
                stack.append((p + (f"exc{n}",), dn))


def size(d: Derivation) -> int:
    return sum(1 for _ in walk(d))


def rules_used(d: Derivation) -> set[str]:
    return {node.rule for _, node in walk(d)}


# --- structural plumbing ---------------------------------------------------


def move(d: Derivation, src: int, dst: int) -> Derivation:
    """Move antecedent entry ``src`` to index ``dst`` by adjacent exchanges."""
    while src < dst:
        d = mk_h(src, d)
        src += 1
    while src > dst:
        d = mk_h(src - 1, d)
        src -= 1
    return d


def weaken(d: Derivation, formulas: Sequence[Formula], pos: Optional[int] = None) -> Derivation:
    """Insert ``formulas`` (in order) starting at ``pos`` (default: the end)."""
    k = len(d.conclusion.antecedent) if pos is None else pos
    for f in formulas:
        d = mk_d(f, k, d)
        k += 1
    return d


def adapt(d: Derivation, target: Sequence[Formula]) -> Derivation:
    """Rearrange ``d``'s antecedent into ``target`` using only g, h and d steps.

    Requires every antecedent formula of ``d`` to occur in ``target``.
    """
    target = tuple(target)
    ant = list(d.conclusion.antecedent)
    missing = set(ant) - set(target)
    if missing:
        raise DerivationError(f"cannot adapt: {', '.join(_show(m) for m in missing)} not in target")
    # contract duplicates
    i = 0
    while i < len(ant):
        j = next((j for j in range(i + 1, len(ant)) if ant[j] == ant[i]), None)
        if j is None:
            i += 1
            continue
        d = move(d, j, i + 1)
        ant.insert(i + 1, ant.pop(j))
        d = mk_g(i, d)
        del ant[i + 1]
    # order by first occurrence in target
    slot = {f: target.index(f) for f in ant}
    for k in range(len(ant)):
        for m in range(len(ant) - 1 - k):
            if slot[ant[m]] > slot[ant[m + 1]]:
                d = mk_h(m, d)
                ant[m], ant[m + 1] = ant[m + 1], ant[m]
    # fill in the rest
    for k, f in enumerate(target):
        if k < len(ant) and ant[k] == f and slot.get(f) == k:
            continue
        d = mk_d(f, k, d)
        ant.insert(k, f)
    assert tuple(ant) == target
    return d
