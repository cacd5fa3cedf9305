"""Finite pseudocomplemented semilattice models and the soundness check.

A model is a finite partial order with a least and a greatest element in
which every pair has a greatest lower bound and every element a
pseudocomplement.  Formulas are evaluated by sending meets to greatest lower
bounds, negations to pseudocomplements and ω-meets to the meet of an initial
segment of instances, whose length is a declared stabilization bound.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .derivation import RECIPES, Derivation, walk
from .formats import FormatError, formula_from_sexpr, formula_to_sexpr, show
from .sexpr import Sym, dumps, loads
from .terms import (
    All,
    Formula,
    Meet,
    Neg,
    PreorderOracle,
    Prime,
    Sequent,
    UnknownPredicate,
    eval_prime,
    instance,
    numeral,
    transitive_closure,
)

AUDIT_WINDOW = 5


class ModelError(ValueError):
    pass


class BoundViolated(ModelError):
    pass


class UnassignedPrime(ModelError):
    pass


@dataclass(frozen=True)
class Model:
    """Immutable operation tables over named elements."""

    elements: tuple
    leq_matrix: np.ndarray = field(repr=False, compare=False)
    meet_table: tuple = field(repr=False)
    neg_table: tuple = field(repr=False)
    top: int
    bottom: int
    assignment: tuple = ()  # sorted ((Prime, element index), ...)
    arithmetic: bool = False  # closed equations not in the assignment go to top/bottom by truth

    @property
    def index(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}

    def leq(self, a: int, b: int) -> bool:
        return bool(self.leq_matrix[a, b])

    def meet(self, a: int, b: int) -> int:
        return self.meet_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def name(self, a: int) -> str:
        return self.elements[a]

    def with_assignment(self, assignment: Mapping, arithmetic: Optional[bool] = None) -> "Model":
        idx = self.index
        pairs = tuple(
            sorted(((p, v if isinstance(v, int) else idx[v]) for p, v in assignment.items()), key=lambda kv: show(kv[0]))
        )
        return Model(
            self.elements,
            self.leq_matrix,
            self.meet_table,
            self.neg_table,
            self.top,
            self.bottom,
            pairs,
            self.arithmetic if arithmetic is None else arithmetic,
        )

    def value_of(self, p: Prime) -> int:
        for q, v in self.assignment:
            if q == p:
                return v
        if self.arithmetic and p.pred == "=":
            try:
                return self.top if eval_prime(p) else self.bottom
            except (UnknownPredicate, ValueError):
                pass
        raise UnassignedPrime(f"no value for {show(p)}")


def build_model(elements: Iterable[str], pairs: Iterable[tuple[str, str]], assignment: Optional[Mapping] = None,
                arithmetic: bool = False) -> Model:
    """Close ``pairs`` reflexively and transitively and derive meet and negation by brute force."""
    elements = tuple(elements)
    if len(set(elements)) != len(elements) or not elements:
        raise ModelError("model elements must be distinct and non-empty")
    idx = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    m = np.eye(n, dtype=bool)
    for a, b in pairs:
        if a not in idx or b not in idx:
            raise ModelError(f"leq pair ({a} {b}) names an unknown element")
        m[idx[a], idx[b]] = True
    m = transitive_closure(m)
    if np.any(m & m.T & ~np.eye(n, dtype=bool)):
        raise ModelError("leq is not antisymmetric")
    tops = [i for i in range(n) if m[:, i].all()]
    bots = [i for i in range(n) if m[i, :].all()]
    if not tops or not bots:
        raise ModelError("model needs a greatest and a least element")
    meet = []
    for a in range(n):
        row = []
        for b in range(n):
            lower = [x for x in range(n) if m[x, a] and m[x, b]]
            glb = [x for x in lower if all(m[y, x] for y in lower)]
            if not glb:
                raise ModelError(f"{elements[a]} and {elements[b]} have no greatest lower bound")
            row.append(glb[0])
        meet.append(tuple(row))
    bot = bots[0]
    neg = []
    for a in range(n):
        cands = [x for x in range(n) if m[meet[a][x], bot]]
        best = [x for x in cands if all(m[y, x] for y in cands)]
        if not best:
            raise ModelError(f"{elements[a]} has no pseudocomplement")
        neg.append(best[0])
    # the biconditional a∧x ≤ ⊥ ⟺ x ≤ ¬a, checked exhaustively
    for a in range(n):
        for x in range(n):
            if bool(m[meet[a][x], bot]) != bool(m[x, neg[a]]):
                raise ModelError(f"pseudocomplement law fails at {elements[a]}, {elements[x]}")
    model = Model(elements, m, tuple(meet), tuple(neg), tops[0], bot)
    return model.with_assignment(assignment or {}, arithmetic)


def standard_models() -> list[Model]:
    """The 2-element and 4-element Boolean algebras and the 3-element chain."""
    two = build_model(["bot", "top"], [("bot", "top")], arithmetic=True)
    four = build_model(
        ["bot", "l", "r", "top"], [("bot", "l"), ("bot", "r"), ("l", "top"), ("r", "top")], arithmetic=True
    )
    chain = build_model(["bot", "mid", "top"], [("bot", "mid"), ("mid", "top")], arithmetic=True)
    return [two, four, chain]


# --- evaluation ------------------------------------------------------------


Bounds = Mapping  # All formula -> stabilization index


def _bound(f: All, bounds: Optional[Bounds], default: Optional[int]) -> int:
    if bounds is not None and f in bounds:
        return bounds[f]
    if default is None:
        raise BoundViolated(f"no stabilization bound for {show(f)}")
    return default


def eval_formula(
    f: Formula, m: Model, bounds: Optional[Bounds] = None, default_bound: Optional[int] = 1, cache: Optional[dict] = None
) -> int:
    """The model element denoted by a closed formula."""
    if cache is not None and f in cache:
        return cache[f]

    def ev(g: Formula) -> int:
        return eval_formula(g, m, bounds, default_bound, cache)

    match f:
        case Prime():
            out = m.value_of(f)
        case Meet(a, b):
            out = m.meet(ev(a), ev(b))
        case Neg(a):
            out = m.neg(ev(a))
        case All():
            k = _bound(f, bounds, default_bound)
            vals = [ev(instance(f, n)) for n in range(1, k + AUDIT_WINDOW + 1)]
            if any(v != vals[k - 1] for v in vals[k:]):
                raise BoundViolated(f"{show(f)} does not stabilize at {k}")
            out = m.top
            for v in vals[:k]:
                out = m.meet(out, v)
        case _:
            raise TypeError(f)
    if cache is not None:
        cache[f] = out
    return out


def eval(f: Formula, m: Model, bounds: Optional[Bounds] = None, default_bound: Optional[int] = 1) -> str:
    """Name of the element denoted by ``f``."""
    return m.name(eval_formula(f, m, bounds, default_bound))


def sequent_holds(
    s: Sequent, m: Model, bounds: Optional[Bounds] = None, default_bound: Optional[int] = 1, cache: Optional[dict] = None
) -> bool:
    left = m.top
    for f in s.antecedent:
        left = m.meet(left, eval_formula(f, m, bounds, default_bound, cache))
    right = m.bottom if s.succedent is None else eval_formula(s.succedent, m, bounds, default_bound, cache)
    return m.leq(left, right)


def _closures(s: Sequent, samples: int) -> Iterable[Sequent]:
    fv = sorted(s.free_vars())
    for values in itertools.product(range(1, samples + 1), repeat=len(fv)):
        inst = s
        for v, n in zip(fv, values):
            inst = inst.substitute(v, numeral(n))
        yield inst


def soundness_check(
    d: Derivation,
    m: Model,
    bounds: Optional[Bounds] = None,
    default_bound: Optional[int] = 1,
    samples: int = 3,
    audit: int = 3,
) -> bool:
    """Every node's conclusion holds in ``m``.

    Free variables (ω parameters) are instantiated at 1..``samples``; recipe
    branches contribute their first ``audit`` generated premisses.
    """
    cache: dict = {}
    seen: set = set()
    stack = [d]
    while stack:
        node = stack.pop()
        for _, sub in walk(node):
            if sub.conclusion in seen:
                continue
            seen.add(sub.conclusion)
            for s in _closures(sub.conclusion, samples):
                if not sequent_holds(s, m, bounds, default_bound, cache):
                    return False
            br = sub.branch
            if br is not None and br.recipe is not None:
                kind = RECIPES[br.recipe.kind]
                stack.extend(
                    kind.instance(br.recipe, br.param, n) for n in range(1, audit + 1) if n not in br.exception_map
                )
    return True


# --- assignments -----------------------------------------------------------


def compatible(m: Model, oracle: PreorderOracle, assignment: Mapping) -> bool:
    idx = m.index
    val = {p: (v if isinstance(v, int) else idx[v]) for p, v in assignment.items()}
    for p in val:
        if oracle.basic(Sequent((), p)) and val[p] != m.top:
            return False
        if oracle.basic(Sequent((p,), None)) and val[p] != m.bottom:
            return False
        for q in val:
            if oracle.basic(Sequent((p,), q)) and not m.leq(val[p], val[q]):
                return False
    return True


def compatible_assignments(m: Model, oracle: PreorderOracle, limit: int = 16) -> list[Model]:
    """Up to ``limit`` copies of ``m`` whose prime assignment respects the oracle."""
    primes = oracle.carrier()
    out = []
    for values in itertools.product(range(len(m.elements)), repeat=len(primes)):
        assignment = dict(zip(primes, values))
        if compatible(m, oracle, assignment):
            out.append(m.with_assignment(assignment))
            if len(out) >= limit:
                break
    return out


# --- model files -----------------------------------------------------------


def model_to_sexpr(m: Model) -> list:
    pairs = [
        [Sym(m.elements[a]), Sym(m.elements[b])]
        for a in range(len(m.elements))
        for b in range(len(m.elements))
        if a != b and m.leq(a, b)
    ]
    out = [
        Sym("model"),
        [Sym("elems")] + [Sym(e) for e in m.elements],
        [Sym("leq")] + pairs,
        [Sym("assign")] + [[formula_to_sexpr(p), Sym(m.elements[v])] for p, v in m.assignment],
    ]
    if m.arithmetic:
        out.append([Sym("arithmetic")])
    return out


def model_from_sexpr(x) -> Model:
    if not (isinstance(x, list) and x and x[0] == Sym("model")):
        raise FormatError("expected (model ...)")
    elems, pairs, assign, arithmetic = None, [], {}, False
    for clause in x[1:]:
        if not (isinstance(clause, list) and clause and isinstance(clause[0], Sym)):
            raise FormatError(f"malformed model clause {dumps(clause)}")
        tag = clause[0].name
        if tag == "elems":
            elems = [_name(e) for e in clause[1:]]
        elif tag == "leq":
            for pr in clause[1:]:
                if not (isinstance(pr, list) and len(pr) == 2):
                    raise FormatError(f"leq entries are (a b), found {dumps(pr)}")
                pairs.append((_name(pr[0]), _name(pr[1])))
        elif tag == "assign":
            for pr in clause[1:]:
                if not (isinstance(pr, list) and len(pr) == 2):
                    raise FormatError(f"assign entries are (prime elem), found {dumps(pr)}")
                p = formula_from_sexpr(pr[0])
                if not isinstance(p, Prime):
                    raise FormatError(f"only primes are assigned, found {dumps(pr[0])}")
                assign[p] = _name(pr[1])
        elif tag == "arithmetic":
            arithmetic = True
        else:
            raise FormatError(f"unknown model clause {tag!r}")
    if elems is None:
        raise FormatError("model has no (elems ...) clause")
    for v in assign.values():
        if v not in elems:
            raise ModelError(f"assignment names unknown element {v!r}")
    return build_model(elems, pairs, assign, arithmetic)


def _name(x) -> str:
    if isinstance(x, Sym):
        return x.name
    if isinstance(x, int):
        return str(x)
    raise FormatError(f"expected an element name, found {dumps(x)}")


def dump_model(m: Model) -> str:
    return dumps(model_to_sexpr(m)) + "\n"


def load_model(text: str) -> Model:
    return model_from_sexpr(loads(text))
