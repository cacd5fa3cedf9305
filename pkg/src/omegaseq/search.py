"""Bounded backward proof search and random corpus generation.

Goals are kept with set-valued antecedents; contraction and exchange are
absorbed by the set, and the materializer puts the g/h/d steps back when it
turns a found proof into a list-ordered derivation.

The right rules a, b, c and the splitting of meets on the left are
invertible and applied eagerly.  Everything else is an OR-choice: a basic
axiom (after weakening), rule e on some negation, or rule f on some ω-meet
with a witness from 1..N or a free variable of the goal.  Rule c recurses
into a single body at a fresh parameter, so a found proof is a genuine
derivation of the calculus; only rule f is truncated.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Optional, Union

from .derivation import (
    Derivation,
    OmegaBranch,
    adapt,
    check,
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
    size,
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
    Var,
    all_vars,
    fresh_var,
    instance,
    numeral,
)


class Verdict(Enum):
    UNDERIVABLE = "Underivable"
    DEPTH_EXCEEDED = "DepthExceeded"

    def __str__(self) -> str:
        return self.value


Underivable = Verdict.UNDERIVABLE
DepthExceeded = Verdict.DEPTH_EXCEEDED


@dataclass(frozen=True)
class SearchConfig:
    omega_n: int = 3
    depth: int = 8

    def __post_init__(self):
        if self.omega_n < 1 or self.depth < 0:
            raise ValueError("omega_n must be >= 1 and depth >= 0")


Key = tuple  # (frozenset of formulas, succedent or None)


@lru_cache(maxsize=None)
def _order(f: Formula) -> str:
    return show(f)


def canon(ant) -> tuple:
    return tuple(sorted(ant, key=_order))


@dataclass
class _Alt:
    tag: str  # basic, a, b, c, i, e, f
    children: tuple
    data: object = None


@dataclass
class _Node:
    depth: int
    alts: list = field(default_factory=list)
    frontier: bool = False


def _vars(key: Key) -> set[str]:
    ant, succ = key
    out: set[str] = set()
    for f in ant:
        out |= all_vars(f)
    if succ is not None:
        out |= all_vars(succ)
    return out


def _free(key: Key) -> set[str]:
    return set(Sequent(tuple(key[0]), key[1]).free_vars())


def _basic_ok(oracle: PreorderOracle, s: Sequent) -> bool:
    return oracle.basic_uniform(s) if s.free_vars() else oracle.basic(s)


def _alternatives(key: Key, oracle: PreorderOracle, cfg: SearchConfig) -> list[_Alt]:
    ant, succ = key
    match succ:
        case Meet(x, y):
            return [_Alt("a", ((ant, x), (ant, y)))]
        case Neg(x):
            return [_Alt("b", ((ant | {x}, None),), x)]
        case All():
            p = fresh_var(_vars(key), "n")
            return [_Alt("c", ((ant, instance(succ, Var(p))),), p)]
    for f in canon(ant):
        if isinstance(f, Meet):
            return [_Alt("i", (((ant - {f}) | {f.left, f.right}, succ),), f)]
    alts = []
    if _basic_ok(oracle, Sequent((), succ)):
        alts.append(_Alt("basic", (), None))
    for f in canon(ant):
        if isinstance(f, Prime) and _basic_ok(oracle, Sequent((f,), succ)):
            alts.append(_Alt("basic", (), f))
    for f in canon(ant):
        if isinstance(f, Neg):
            alts.append(_Alt("e", ((ant, f.body),), f))
    witnesses = [numeral(n) for n in range(1, cfg.omega_n + 1)] + [Var(v) for v in sorted(_free(key))]
    for f in canon(ant):
        if isinstance(f, All):
            seen = set()
            for t in witnesses:
                inst = instance(f, t)
                if inst in ant or inst in seen:
                    continue
                seen.add(inst)
                alts.append(_Alt("f", ((ant | {inst}, succ),), (f, t)))
    return alts


class _Search:
    def __init__(self, root: Key, oracle: PreorderOracle, cfg: SearchConfig):
        self.root, self.oracle, self.cfg = root, oracle, cfg
        self.nodes: dict[Key, _Node] = {}
        self.choice: dict[Key, _Alt] = {}
        self._explore()

    def _explore(self) -> None:
        self.nodes[self.root] = _Node(0)
        queue = deque([self.root])
        while queue:
            key = queue.popleft()
            node = self.nodes[key]
            alts = _alternatives(key, self.oracle, self.cfg)
            if node.depth >= self.cfg.depth:
                node.alts = [a for a in alts if not a.children]
                node.frontier = len(node.alts) < len(alts)
                continue
            node.alts = alts
            for alt in alts:
                for child in alt.children:
                    if child not in self.nodes:
                        self.nodes[child] = _Node(node.depth + 1)
                        queue.append(child)

    def fixpoint(self, assume_frontier: bool) -> set:
        proven = {k for k, n in self.nodes.items() if assume_frontier and n.frontier}
        choice: dict[Key, _Alt] = {}
        changed = True
        while changed:
            changed = False
            fresh = {}
            for key, node in self.nodes.items():
                if key in proven:
                    continue
                for alt in node.alts:
                    if all(c in proven for c in alt.children):
                        fresh[key] = alt
                        break
            if fresh:
                changed = True
                proven |= fresh.keys()
                choice.update(fresh)
        if not assume_frontier:
            self.choice = choice
        return proven

    def materialize(self, key: Key, memo: dict) -> Derivation:
        if key in memo:
            return memo[key]
        ant, succ = key
        alt = self.choice[key]
        order = canon(ant)
        kids = [self.materialize(c, memo) for c in alt.children]
        match alt.tag:
            case "basic":
                left = () if alt.data is None else (alt.data,)
                d = adapt(mk_basic(Sequent(left, succ)), order)
            case "a":
                d = mk_a(*kids)
            case "b":
                d = mk_b(adapt(kids[0], (alt.data,) + order))
            case "c":
                d = mk_c(succ, OmegaBranch(alt.data, kids[0]))
            case "i":
                m = alt.data
                pos = order.index(m)
                d = mk_i(pos, adapt(kids[0], order[:pos] + (m.left, m.right) + order[pos + 1 :]))
            case "e":
                d = adapt(mk_e(kids[0], succ), order)
            case "f":
                f, t = alt.data
                d = mk_f(f, t, adapt(kids[0], (instance(f, t),) + order))
                d = adapt(d, order)
        memo[key] = d
        return d


def decide(
    s: Sequent, oracle: PreorderOracle, cfg: Optional[SearchConfig] = None
) -> Union[Derivation, Verdict]:
    """A derivation of ``s`` (antecedent order preserved), Underivable, or DepthExceeded."""
    cfg = cfg or SearchConfig()
    root = (frozenset(s.antecedent), s.succedent)
    search = _Search(root, oracle, cfg)
    if root in search.fixpoint(assume_frontier=False):
        d = search.materialize(root, {})
        return adapt(d, s.antecedent)
    if root in search.fixpoint(assume_frontier=True):
        return DepthExceeded
    return Underivable


# --- random formulas and corpora -------------------------------------------


def random_formula(rng: random.Random, primes: list[Prime], depth: int, omega: bool = True) -> Formula:
    """A closed formula of depth at most ``depth`` (primes count as depth 1)."""
    if depth <= 1 or rng.random() < 0.3:
        return rng.choice(primes)
    k = rng.randrange(4 if omega else 3)
    if k == 0:
        return Meet(random_formula(rng, primes, depth - 1, omega), random_formula(rng, primes, depth - 1, omega))
    if k in (1, 2):
        return Neg(random_formula(rng, primes, depth - 1, omega))
    return All("x", random_formula(rng, primes, depth - 1, omega))


def _seeds(oracle: PreorderOracle) -> list[Derivation]:
    primes = oracle.carrier()
    out = []
    for p in primes:
        for s in (Sequent((), p), Sequent((p,), None)):
            if oracle.basic(s):
                out.append(mk_basic(s))
        for q in primes:
            if oracle.basic(Sequent((p,), q)):
                out.append(mk_basic(Sequent((p,), q)))
    return out


def _pick(rng: random.Random, pool: list, pred=lambda d: True) -> Optional[Derivation]:
    cands = [d for d in pool[-60:] if pred(d)] or [d for d in pool if pred(d)]
    return rng.choice(cands) if cands else None


def _forward_step(rng: random.Random, pool: list, formulas: list, primes: list) -> Optional[Derivation]:
    rule = rng.choice("abcdefghij")
    d = _pick(rng, pool)
    ant, succ = d.conclusion.antecedent, d.conclusion.succedent
    fv = d.conclusion.all_vars()
    match rule:
        case "a":
            other = _pick(rng, pool, lambda e: e.conclusion.succedent is not None)
            if succ is None or other is None:
                return None
            ctx = ant + tuple(f for f in other.conclusion.antecedent if f not in ant)
            return mk_a(adapt(d, ctx), adapt(other, ctx))
        case "b":
            d = _pick(rng, pool, lambda e: e.conclusion.antecedent and e.conclusion.succedent is None)
            return None if d is None else mk_b(d)
        case "c":
            if succ is None:
                return None
            p = fresh_var(fv, "n")
            return mk_c(All(fresh_var(fv | {p}, "x"), succ), OmegaBranch(p, d))
        case "d":
            return mk_d(rng.choice(formulas), rng.randint(0, len(ant)), d)
        case "e":
            if succ is None:
                return None
            return mk_e(d, rng.choice([None, rng.choice(primes), rng.choice(formulas)]))
        case "f":
            if not ant:
                return None
            return mk_f(All(fresh_var(fv, "x"), ant[0]), numeral(rng.randint(1, 3)), d)
        case "g":
            if not ant:
                return None
            k = rng.randrange(len(ant))
            return mk_g(k, mk_d(ant[k], k, d))
        case "h" | "i":
            if len(ant) < 2:
                return None
            k = rng.randrange(len(ant) - 1)
            return (mk_h if rule == "h" else mk_i)(k, d)
        case "j":
            return mk_j(OmegaBranch(fresh_var(fv, "n"), d))


def generate_corpus(
    oracle: PreorderOracle, cfg: Optional[SearchConfig] = None, count: int = 10, seed: int = 0, max_size: int = 40
) -> list[Derivation]:
    """``count`` checked derivations built by random forward rule application."""
    cfg = cfg or SearchConfig()
    rng = random.Random(seed)
    pool = _seeds(oracle)
    if not pool:
        raise ValueError("the oracle grants no basic sequent over its carrier")
    primes = oracle.carrier()
    formulas = list(primes)
    out: list[Derivation] = []
    while len(out) < count:
        d = _forward_step(rng, pool, formulas, primes)
        if d is None or size(d) > max_size or len(d.conclusion.antecedent) > 4:
            continue
        check(d, oracle)
        pool.append(d)
        out.append(d)
        if d.conclusion.succedent is not None and len(formulas) < 40:
            formulas.append(d.conclusion.succedent)
    return out


def cut_pairs(
    oracle: PreorderOracle, cfg: Optional[SearchConfig] = None, count: int = 10, seed: int = 0, depth: int = 3
) -> list[tuple[Derivation, Derivation]]:
    """Pairs (a→b, b→c) found by search over random closed formulas."""
    cfg = cfg or SearchConfig()
    rng = random.Random(seed)
    primes = oracle.carrier()
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * (count + 10):
            raise RuntimeError("too few derivable pairs; widen the formula distribution")
        a, b = random_formula(rng, primes, depth), random_formula(rng, primes, depth)
        d1 = decide(Sequent((a,), b), oracle, cfg)
        if not isinstance(d1, Derivation):
            continue
        for _ in range(8):
            c = random_formula(rng, primes, depth)
            d2 = decide(Sequent((b,), c), oracle, cfg)
            if isinstance(d2, Derivation):
                out.append((d1, d2))
                break
    return out
