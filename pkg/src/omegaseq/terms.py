"""Terms, formulas, sequents, substitution and the prime-level preorder oracles.

Numerals are successor chains over ``One`` so that substituting a numeral
into ``A(a')`` yields ``A(n')`` *syntactically*, which the ω-rule machinery
relies on.  Free variables in a sequent are read as universally quantified:
an oracle asked about a sequent with variables must answer for every
instance (see :meth:`PreorderOracle.basic_uniform`).
"""

from __future__ import annotations

import itertools
import random
from abc import ABC, abstractmethod
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np


class FreeVariablePresent(ValueError):
    pass


class UnknownPredicate(ValueError):
    pass


# --- terms -----------------------------------------------------------------


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Succ:
    arg: "Term"


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Mul:
    left: "Term"
    right: "Term"


Term = Union[One, Var, Succ, Add, Mul]

ONE = One()


def numeral(n: int) -> Term:
    if n < 1:
        raise ValueError(f"numerals start at 1, got {n}")
    t: Term = ONE
    for _ in range(n - 1):
        t = Succ(t)
    return t


def numeral_value(t: Term) -> Optional[int]:
    """The value of a pure successor chain, or None for any other term."""
    n = 1
    while isinstance(t, Succ):
        n += 1
        t = t.arg
    return n if isinstance(t, One) else None


def render_numeral(n: int) -> str:
    if n < 1:
        raise ValueError(f"numerals start at 1, got {n}")
    return "1" + "′" * (n - 1)


def parse_numeral(s: str) -> int:
    s = s.replace("'", "′")
    if not s.startswith("1") or s[1:].strip("′"):
        raise ValueError(f"not a numeral: {s!r}")
    return len(s)


def term_vars(t: Term) -> frozenset[str]:
    match t:
        case One():
            return frozenset()
        case Var(name):
            return frozenset({name})
        case Succ(arg):
            return term_vars(arg)
        case Add(l, r) | Mul(l, r):
            return term_vars(l) | term_vars(r)
    raise TypeError(t)


def subst_term(t: Term, v: str, s: Term) -> Term:
    match t:
        case One():
            return t
        case Var(name):
            return s if name == v else t
        case Succ(arg):
            return Succ(subst_term(arg, v, s))
        case Add(l, r):
            return Add(subst_term(l, v, s), subst_term(r, v, s))
        case Mul(l, r):
            return Mul(subst_term(l, v, s), subst_term(r, v, s))
    raise TypeError(t)


def eval_term(t: Term) -> int:
    match t:
        case One():
            return 1
        case Var(name):
            raise FreeVariablePresent(f"term contains free variable {name!r}")
        case Succ(arg):
            return eval_term(arg) + 1
        case Add(l, r):
            return eval_term(l) + eval_term(r)
        case Mul(l, r):
            return eval_term(l) * eval_term(r)
    raise TypeError(t)


# --- formulas --------------------------------------------------------------


@dataclass(frozen=True)
class Prime:
    pred: str
    args: tuple = ()


@dataclass(frozen=True)
class Meet:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Neg:
    body: "Formula"


@dataclass(frozen=True)
class All:
    var: str
    body: "Formula"


Formula = Union[Prime, Meet, Neg, All]


def atom(name: str) -> Prime:
    """A nullary prime, the carrier elements of generic preorders."""
    return Prime(name)


def eq(s: Term, t: Term) -> Prime:
    return Prime("=", (s, t))


def free_vars(f: Formula) -> frozenset[str]:
    match f:
        case Prime(_, args):
            return frozenset().union(*(term_vars(a) for a in args))
        case Meet(l, r):
            return free_vars(l) | free_vars(r)
        case Neg(b):
            return free_vars(b)
        case All(x, b):
            return free_vars(b) - {x}
    raise TypeError(f)


def all_vars(f: Formula) -> frozenset[str]:
    """Free and bound variable names, for fresh-name generation."""
    match f:
        case Prime():
            return free_vars(f)
        case Meet(l, r):
            return all_vars(l) | all_vars(r)
        case Neg(b):
            return all_vars(b)
        case All(x, b):
            return all_vars(b) | {x}
    raise TypeError(f)


def fresh_var(avoid: Iterable[str], base: str = "a") -> str:
    avoid = set(avoid)
    if base not in avoid:
        return base
    for i in itertools.count(1):
        name = f"{base}{i}"
        if name not in avoid:
            return name
    raise AssertionError


def substitute(f: Formula, v: str, t: Term) -> Formula:
    """Replace free occurrences of ``v`` by ``t``; binders are renamed if ``t`` would be captured."""
    match f:
        case Prime(p, args):
            return Prime(p, tuple(subst_term(a, v, t) for a in args))
        case Meet(l, r):
            return Meet(substitute(l, v, t), substitute(r, v, t))
        case Neg(b):
            return Neg(substitute(b, v, t))
        case All(x, b):
            if x == v:
                return f
            if x in term_vars(t):
                y = fresh_var(all_vars(b) | term_vars(t) | {v}, x)
                b = substitute(b, x, Var(y))
                x = y
            return All(x, substitute(b, v, t))
    raise TypeError(f)


def instance(f: All, n: Union[int, Term]) -> Formula:
    """The family member of an ω-meet at ``n``."""
    t = numeral(n) if isinstance(n, int) else n
    return substitute(f.body, f.var, t)


def formula_depth(f: Formula) -> int:
    """Primes have depth 1; each connective adds one."""
    match f:
        case Prime():
            return 1
        case Meet(l, r):
            return 1 + max(formula_depth(l), formula_depth(r))
        case Neg(b) | All(_, b):
            return 1 + formula_depth(b)
    raise TypeError(f)


def formula_size(f: Formula) -> int:
    match f:
        case Prime():
            return 1
        case Meet(l, r):
            return 1 + formula_size(l) + formula_size(r)
        case Neg(b) | All(_, b):
            return 1 + formula_size(b)
    raise TypeError(f)


def is_closed(f: Formula) -> bool:
    return not free_vars(f)


# --- sequents --------------------------------------------------------------


@dataclass(frozen=True)
class Sequent:
    antecedent: tuple = ()
    succedent: Optional[Formula] = None

    def __post_init__(self):
        if not isinstance(self.antecedent, tuple):
            object.__setattr__(self, "antecedent", tuple(self.antecedent))

    def free_vars(self) -> frozenset[str]:
        fv = frozenset().union(*(free_vars(a) for a in self.antecedent))
        if self.succedent is not None:
            fv |= free_vars(self.succedent)
        return fv

    def all_vars(self) -> frozenset[str]:
        fv = frozenset().union(*(all_vars(a) for a in self.antecedent))
        if self.succedent is not None:
            fv |= all_vars(self.succedent)
        return fv

    def substitute(self, v: str, t: Term) -> "Sequent":
        succ = None if self.succedent is None else substitute(self.succedent, v, t)
        return Sequent(tuple(substitute(a, v, t) for a in self.antecedent), succ)


EMPTY_SEQUENT = Sequent((), None)


# --- arithmetic ------------------------------------------------------------


def eval_prime(p: Prime) -> bool:
    if p.pred == "=" and len(p.args) == 2:
        return eval_term(p.args[0]) == eval_term(p.args[1])
    raise UnknownPredicate(f"no arithmetic meaning for predicate {p.pred!r}/{len(p.args)}")


Poly = dict  # monomial (sorted tuple of variable names) -> coefficient


def _poly_add(a: Poly, b: Poly, sign: int = 1) -> Poly:
    out = dict(a)
    for m, c in b.items():
        out[m] = out.get(m, 0) + sign * c
        if out[m] == 0:
            del out[m]
    return out


def _poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for (ma, ca), (mb, cb) in itertools.product(a.items(), b.items()):
        m = tuple(sorted(ma + mb))
        out[m] = out.get(m, 0) + ca * cb
        if out[m] == 0:
            del out[m]
    return out


def polynomial(t: Term, shift: bool = False) -> Poly:
    """Polynomial normal form; with ``shift`` every variable v is read as w+1 (w ≥ 0)."""
    match t:
        case One():
            return {(): 1}
        case Var(name):
            return {(name,): 1, (): 1} if shift else {(name,): 1}
        case Succ(arg):
            return _poly_add(polynomial(arg, shift), {(): 1})
        case Add(l, r):
            return _poly_add(polynomial(l, shift), polynomial(r, shift))
        case Mul(l, r):
            return _poly_mul(polynomial(l, shift), polynomial(r, shift))
    raise TypeError(t)


def uniform_truth(p: Prime) -> Optional[bool]:
    """True/False if an equality holds/fails for every value of its variables, else None.

    Falsity is only recognised when the difference polynomial, rewritten over
    variables ranging from 0, has a nonzero constant and no coefficient of
    the opposite sign; this is sufficient, not necessary.
    """
    if p.pred != "=" or len(p.args) != 2:
        return None
    s, t = p.args
    if not (term_vars(s) | term_vars(t)):
        return eval_prime(p)
    if not _poly_add(polynomial(s), polynomial(t), -1):
        return True
    diff = _poly_add(polynomial(s, True), polynomial(t, True), -1)
    const = diff.get((), 0)
    if const > 0 and all(c >= 0 for c in diff.values()):
        return False
    if const < 0 and all(c <= 0 for c in diff.values()):
        return False
    return None


def _prime_key(p: Prime):
    if p.pred == "=" and len(p.args) == 2:
        a, b = (frozenset(polynomial(x).items()) for x in p.args)
        return ("=", frozenset({a, b}))
    return p


# --- oracles ---------------------------------------------------------------


def basic_shape(s: Sequent) -> Optional[tuple[Optional[Prime], Optional[Prime]]]:
    """(left, right) if ``s`` has the shape of a basic relation, else None."""
    if len(s.antecedent) > 1:
        return None
    left = s.antecedent[0] if s.antecedent else None
    right = s.succedent
    for f in (left, right):
        if f is not None and not isinstance(f, Prime):
            return None
    return left, right


class PreorderOracle(ABC):
    """Decides basic relations ``p→q``, ``→p``, ``p→`` and ``→`` among prime formulas.

    Besides reflexivity and transitivity, implementations must respect the
    extremal reading of the empty sides: ``→p`` and ``p→q`` give ``→q``;
    ``p→q`` and ``q→`` give ``p→``; ``p→`` gives ``p→q``; ``→q`` gives
    ``p→q``; and ``→`` never holds.
    """

    @abstractmethod
    def basic(self, s: Sequent) -> bool:
        """Decide a closed basic sequent."""

    def basic_uniform(self, s: Sequent) -> bool:
        """Decide a basic sequent for every value of its free variables (sound, may be incomplete)."""
        if not s.free_vars():
            return self.basic(s)
        shape = basic_shape(s)
        return shape is not None and shape[0] is not None and shape[0] == shape[1]

    def carrier(self) -> list[Prime]:
        return []

    def truth(self, p: Prime) -> Optional[bool]:
        """Whether ``→p`` (True) or ``p→`` (False) is basic; None if neither."""
        if self.basic(Sequent((), p)):
            return True
        if self.basic(Sequent((p,), None)):
            return False
        return None

    def uniform_truth(self, p: Prime) -> Optional[bool]:
        if self.basic_uniform(Sequent((), p)):
            return True
        if self.basic_uniform(Sequent((p,), None)):
            return False
        return None


class FinitePreorder(PreorderOracle):
    """Reflexive-transitive closure of a finite relation on named primes; carries no truth."""

    def __init__(self, elements: Iterable, pairs: Iterable[tuple] = ()):
        self.elements = tuple(_as_prime(e) for e in elements)
        self.index = {p: i for i, p in enumerate(self.elements)}
        n = len(self.elements)
        m = np.eye(n, dtype=bool)
        for a, b in pairs:
            m[self.index[_as_prime(a)], self.index[_as_prime(b)]] = True
        self.matrix = transitive_closure(m)

    def basic(self, s: Sequent) -> bool:
        shape = basic_shape(s)
        if shape is None or shape[0] is None or shape[1] is None:
            return False
        i, j = self.index.get(shape[0]), self.index.get(shape[1])
        return i is not None and j is not None and bool(self.matrix[i, j])

    def carrier(self) -> list[Prime]:
        return list(self.elements)

    def pairs(self) -> list[tuple[Prime, Prime]]:
        return [(self.elements[i], self.elements[j]) for i, j in zip(*np.nonzero(self.matrix))]

    def __repr__(self):
        names = " ".join(e.pred for e in self.elements)
        return f"FinitePreorder({names}; {int(self.matrix.sum())} pairs)"


class TruthOracle(PreorderOracle):
    """Basic relations by material implication between truth values of closed primes."""

    @abstractmethod
    def prime_truth(self, p: Prime) -> bool: ...

    def basic(self, s: Sequent) -> bool:
        shape = basic_shape(s)
        if shape is None or s.free_vars():
            return False
        left, right = shape
        try:
            lt = True if left is None else self.prime_truth(left)
            rt = False if right is None else self.prime_truth(right)
        except (UnknownPredicate, KeyError):
            return False
        return (not lt) or rt


class ArithmeticOracle(TruthOracle):
    def prime_truth(self, p: Prime) -> bool:
        return eval_prime(p)

    def basic_uniform(self, s: Sequent) -> bool:
        if not s.free_vars():
            return self.basic(s)
        shape = basic_shape(s)
        if shape is None:
            return False
        left, right = shape
        lt = True if left is None else uniform_truth(left)
        rt = False if right is None else uniform_truth(right)
        if lt is False or rt is True:
            return True
        return left is not None and right is not None and _prime_key(left) == _prime_key(right)

    def carrier(self) -> list[Prime]:
        one, two, three = numeral(1), numeral(2), numeral(3)
        return [eq(one, one), eq(Add(one, one), two), eq(one, three), eq(two, three)]

    def __repr__(self):
        return "ArithmeticOracle()"


class ValuationOracle(TruthOracle):
    """Named primes with a fixed truth value each."""

    def __init__(self, valuation: Mapping):
        self.valuation = {_as_prime(k): bool(v) for k, v in valuation.items()}

    def prime_truth(self, p: Prime) -> bool:
        return self.valuation[p]

    def carrier(self) -> list[Prime]:
        return list(self.valuation)

    def __repr__(self):
        return f"ValuationOracle({ {k.pred: v for k, v in self.valuation.items()} })"


def _as_prime(x) -> Prime:
    return x if isinstance(x, Prime) else atom(str(x))


def arithmetic_oracle() -> ArithmeticOracle:
    return ArithmeticOracle()


def finite_preorder(elements: Iterable, pairs: Iterable[tuple] = ()) -> FinitePreorder:
    return FinitePreorder(elements, pairs)


def valuation_oracle(valuation: Mapping) -> ValuationOracle:
    return ValuationOracle(valuation)


# --- preorder utilities ----------------------------------------------------


def transitive_closure(m: np.ndarray) -> np.ndarray:
    m = m.copy()
    for k in range(m.shape[0]):
        m |= m[:, k : k + 1] & m[k : k + 1, :]
    return m


def _canonical(m: np.ndarray) -> bytes:
    n = m.shape[0]
    return min(m[np.ix_(p, p)].tobytes() for p in itertools.permutations(range(n)))


def enumerate_preorders(n: int) -> list[np.ndarray]:
    """All preorders on ``n`` points, one per isomorphism class."""
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    seen: dict[bytes, np.ndarray] = {}
    for bits in itertools.product((False, True), repeat=len(off)):
        m = np.eye(n, dtype=bool)
        for (i, j), b in zip(off, bits):
            m[i, j] = b
        if not np.array_equal(transitive_closure(m), m):
            continue
        seen.setdefault(_canonical(m), m)
    return list(seen.values())


def random_preorder(n: int, rng: random.Random, density: float = 0.3) -> np.ndarray:
    m = np.eye(n, dtype=bool)
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < density:
                m[i, j] = True
    return transitive_closure(m)


def preorder_from_matrix(m: np.ndarray, names: Optional[list[str]] = None) -> FinitePreorder:
    n = m.shape[0]
    names = names or [f"p{i}" for i in range(n)]
    pairs = [(names[i], names[j]) for i, j in zip(*np.nonzero(m))]
    return FinitePreorder(names, pairs)
