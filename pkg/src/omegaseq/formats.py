"""S-expression codecs for terms, formulas, sequents, proofs and oracles.

Every file starts with a kind header: ``(proof D)``, ``(script D)``,
``(oracle O)``, ``(model ...)``, ``(sequent S)``.  Printing is canonical so
golden files are byte-stable.
"""

from __future__ import annotations

from typing import Optional

from . import derivation as dv
from .sexpr import ParseError, SExpr, Sym, dumps, loads
from .terms import (
    Add,
    All,
    ArithmeticOracle,
    FinitePreorder,
    Formula,
    Meet,
    Mul,
    Neg,
    One,
    PreorderOracle,
    Prime,
    Sequent,
    Succ,
    Term,
    ValuationOracle,
    Var,
    numeral,
    numeral_value,
)

ABSENT = Sym("_")
RESERVED = {"_", "s", "+", "*", "=", "prime", "meet", "neg", "all", "seq"}


class FormatError(ParseError):
    """A well-formed S-expression that does not encode the expected object."""

    def __init__(self, message: str):
        super().__init__(message, 0, 0)

    def __str__(self):
        return self.message


def _sym(x: SExpr, what: str) -> str:
    if not isinstance(x, Sym) or x.name in RESERVED:
        raise FormatError(f"expected {what}, found {dumps(x)}")
    return x.name


def _head(x: SExpr) -> Optional[str]:
    if isinstance(x, list) and x and isinstance(x[0], Sym):
        return x[0].name
    return None


# --- terms -----------------------------------------------------------------


def term_to_sexpr(t: Term) -> SExpr:
    n = numeral_value(t)
    if n is not None:
        return n
    match t:
        case Var(name):
            return Sym(name)
        case Succ(arg):
            return [Sym("s"), term_to_sexpr(arg)]
        case Add(l, r):
            return [Sym("+"), term_to_sexpr(l), term_to_sexpr(r)]
        case Mul(l, r):
            return [Sym("*"), term_to_sexpr(l), term_to_sexpr(r)]
    raise TypeError(t)


def term_from_sexpr(x: SExpr) -> Term:
    if isinstance(x, int):
        if x < 1:
            raise FormatError("numerals start at 1")
        return numeral(x)
    if isinstance(x, Sym):
        return Var(_sym(x, "a variable"))
    match _head(x), len(x):
        case "s", 2:
            return Succ(term_from_sexpr(x[1]))
        case "+", 3:
            return Add(term_from_sexpr(x[1]), term_from_sexpr(x[2]))
        case "*", 3:
            return Mul(term_from_sexpr(x[1]), term_from_sexpr(x[2]))
    raise FormatError(f"not a term: {dumps(x)}")


# --- formulas --------------------------------------------------------------


def formula_to_sexpr(f: Formula) -> SExpr:
    match f:
        case Prime(p, ()):
            return Sym(p)
        case Prime(p, args):
            return [Sym("prime"), [Sym(p)] + [term_to_sexpr(a) for a in args]]
        case Meet(l, r):
            return [Sym("meet"), formula_to_sexpr(l), formula_to_sexpr(r)]
        case Neg(b):
            return [Sym("neg"), formula_to_sexpr(b)]
        case All(v, b):
            return [Sym("all"), Sym(v), formula_to_sexpr(b)]
    raise TypeError(f)


def formula_from_sexpr(x: SExpr) -> Formula:
    if isinstance(x, Sym):
        return Prime(_sym(x, "a prime name"))
    match _head(x), len(x) if isinstance(x, list) else 0:
        case "prime", 2:
            body = x[1]
            if isinstance(body, Sym):
                return Prime(_sym(body, "a prime name"))
            if isinstance(body, list) and body and isinstance(body[0], Sym):
                return Prime(body[0].name, tuple(term_from_sexpr(a) for a in body[1:]))
        case "meet", 3:
            return Meet(formula_from_sexpr(x[1]), formula_from_sexpr(x[2]))
        case "neg", 2:
            return Neg(formula_from_sexpr(x[1]))
        case "all", 3:
            return All(_sym(x[1], "a binder variable"), formula_from_sexpr(x[2]))
    raise FormatError(f"not a formula: {dumps(x)}")


def sequent_to_sexpr(s: Sequent) -> SExpr:
    succ = ABSENT if s.succedent is None else formula_to_sexpr(s.succedent)
    return [Sym("seq"), [formula_to_sexpr(a) for a in s.antecedent], succ]


def sequent_from_sexpr(x: SExpr) -> Sequent:
    if _head(x) != "seq" or len(x) != 3 or not isinstance(x[1], list):
        raise FormatError(f"not a sequent: {dumps(x)}")
    succ = None if x[2] == ABSENT else formula_from_sexpr(x[2])
    if _head(x[1]) in ("meet", "neg", "all", "prime"):
        # a lone compound antecedent written without its list brackets
        return Sequent((formula_from_sexpr(x[1]),), succ)
    return Sequent(tuple(formula_from_sexpr(a) for a in x[1]), succ)


def optional_formula_to_sexpr(f: Optional[Formula]) -> SExpr:
    return ABSENT if f is None else formula_to_sexpr(f)


def show(x) -> str:
    """One-line rendering of a term, formula, sequent or derivation conclusion."""
    if isinstance(x, dv.Derivation):
        x = x.conclusion
    if isinstance(x, Sequent):
        return dumps(sequent_to_sexpr(x), width=10**9)
    if isinstance(x, (Prime, Meet, Neg, All)):
        return dumps(formula_to_sexpr(x), width=10**9)
    if isinstance(x, (One, Var, Succ, Add, Mul)):
        return dumps(term_to_sexpr(x), width=10**9)
    if x is None:
        return "_"
    return str(x)


# --- recipe arguments ------------------------------------------------------


def arg_to_sexpr(a) -> SExpr:
    if isinstance(a, dv.Derivation):
        return [Sym("deriv"), derivation_to_sexpr(a)]
    if isinstance(a, Sequent):
        return sequent_to_sexpr(a)
    if isinstance(a, (Prime, Meet, Neg, All)):
        return [Sym("form"), formula_to_sexpr(a)]
    if isinstance(a, (One, Var, Succ, Add, Mul)):
        return [Sym("term"), term_to_sexpr(a)]
    if a is None:
        return ABSENT
    if isinstance(a, bool):
        return Sym("true" if a else "false")
    if isinstance(a, int):
        return a
    if isinstance(a, str):
        return [Sym("name"), Sym(a)]
    if isinstance(a, tuple):
        return [Sym("tuple")] + [arg_to_sexpr(b) for b in a]
    if isinstance(a, dv.Recipe):
        return _recipe_to_sexpr(a)
    raise TypeError(f"cannot encode recipe argument {a!r}")


def arg_from_sexpr(x: SExpr, path=()):
    if isinstance(x, int):
        return x
    if x == ABSENT:
        return None
    if x in (Sym("true"), Sym("false")):
        return x == Sym("true")
    match _head(x):
        case "deriv":
            return derivation_from_sexpr(x[1], path)
        case "seq":
            return sequent_from_sexpr(x)
        case "form":
            return formula_from_sexpr(x[1])
        case "term":
            return term_from_sexpr(x[1])
        case "name":
            return x[1].name
        case "tuple":
            return tuple(arg_from_sexpr(y, path) for y in x[1:])
        case "recipe":
            return _recipe_from_sexpr(x, path)
    raise FormatError(f"not a recipe argument: {dumps(x)}")


# --- derivations -----------------------------------------------------------


def _branch_body_to_sexpr(br: dv.OmegaBranch) -> SExpr:
    if br.body is not None:
        return derivation_to_sexpr(br.body)
    return _recipe_to_sexpr(br.recipe)


def _recipe_to_sexpr(r: dv.Recipe) -> SExpr:
    return [Sym("recipe"), Sym(r.kind), sequent_to_sexpr(r.template)] + [arg_to_sexpr(a) for a in r.args]


def _recipe_from_sexpr(x: SExpr, path) -> dv.Recipe:
    if len(x) < 3:
        raise FormatError(f"malformed recipe {dumps(x)[:60]}")
    kind = _sym(x[1], "a recipe kind")
    if kind not in dv.RECIPES:
        from . import admissible  # noqa: F401  registers the recipe kinds
    if kind not in dv.RECIPES:
        raise FormatError(f"unknown recipe kind {kind!r}")
    args = tuple(arg_from_sexpr(a, path + ("recipe",)) for a in x[3:])
    return dv.Recipe(kind, sequent_from_sexpr(x[2]), args)


def _exceptions_to_sexpr(br: dv.OmegaBranch) -> SExpr:
    return [[n, derivation_to_sexpr(dn)] for n, dn in br.exceptions]


def derivation_to_sexpr(d: dv.Derivation) -> SExpr:
    r = Sym(d.rule)
    match d.rule:
        case "basic":
            return [r, sequent_to_sexpr(d.conclusion)]
        case "a":
            return [r, derivation_to_sexpr(d.premisses[0]), derivation_to_sexpr(d.premisses[1])]
        case "b":
            return [r, derivation_to_sexpr(d.premiss)]
        case "c":
            br = d.branch
            return [r, formula_to_sexpr(d.formula), Sym(br.param), _branch_body_to_sexpr(br), _exceptions_to_sexpr(br)]
        case "d":
            return [r, formula_to_sexpr(d.formula), d.pos, derivation_to_sexpr(d.premiss)]
        case "e":
            return [r, optional_formula_to_sexpr(d.formula), derivation_to_sexpr(d.premiss)]
        case "f":
            return [r, formula_to_sexpr(d.formula), term_to_sexpr(d.term), derivation_to_sexpr(d.premiss)]
        case "g" | "h" | "i":
            return [r, d.pos, derivation_to_sexpr(d.premiss)]
        case "j":
            br = d.branch
            return [r, Sym(br.param), _branch_body_to_sexpr(br), _exceptions_to_sexpr(br)]
    raise TypeError(d.rule)


def _int(x: SExpr, what: str) -> int:
    if not isinstance(x, int):
        raise FormatError(f"expected {what}, found {dumps(x)}")
    return x


def _branch_from_sexpr(param: str, body: SExpr, exc: SExpr, path, extra=None) -> dv.OmegaBranch:
    if not isinstance(exc, list):
        raise FormatError(f"expected an exception table, found {dumps(exc)}")
    table = []
    for item in exc:
        if not (isinstance(item, list) and len(item) == 2):
            raise FormatError(f"exception entries are (n D), found {dumps(item)}")
        n = _int(item[0], "an exception index")
        table.append((n, derivation_from_sexpr(item[1], path + (f"exc{n}",), extra)))
    if _head(body) == "recipe":
        return dv.OmegaBranch(param, None, tuple(table), _recipe_from_sexpr(body, path))
    return dv.OmegaBranch(param, derivation_from_sexpr(body, path + ("body",), extra), tuple(table))


def derivation_from_sexpr(x: SExpr, path=(), extra=None) -> dv.Derivation:
    """Decode a proof tree; schema violations surface as RuleMismatch with the node path.

    ``extra`` maps additional head tags to ``(args, path) -> Derivation``
    callbacks; the script reader uses it for admissible rules.
    """
    head = _head(x)
    if head is None:
        raise FormatError(f"not a derivation: {dumps(x)}")

    def sub(k, tag=None):
        return derivation_from_sexpr(x[k], path + ((k - 1 if tag is None else tag),), extra)

    try:
        match head, len(x):
            case "basic", 2:
                return dv.mk_basic(sequent_from_sexpr(x[1]))
            case "a", 3:
                return dv.mk_a(sub(1, 0), sub(2, 1))
            case "b", 2:
                return dv.mk_b(sub(1, 0))
            case "c", 5:
                br = _branch_from_sexpr(_sym(x[2], "a parameter"), x[3], x[4], path, extra)
                return dv.mk_c(formula_from_sexpr(x[1]), br)
            case "d", 4:
                return dv.mk_d(formula_from_sexpr(x[1]), _int(x[2], "a position"), sub(3, 0))
            case "e", 3:
                rhs = None if x[1] == ABSENT else formula_from_sexpr(x[1])
                return dv.mk_e(sub(2, 0), rhs)
            case "f", 4:
                return dv.mk_f(formula_from_sexpr(x[1]), term_from_sexpr(x[2]), sub(3, 0))
            case ("g" | "h" | "i"), 3:
                ctor = {"g": dv.mk_g, "h": dv.mk_h, "i": dv.mk_i}[head]
                return ctor(_int(x[1], "a position"), sub(2, 0))
            case "j", 4:
                return dv.mk_j(_branch_from_sexpr(_sym(x[1], "a parameter"), x[2], x[3], path, extra))
    except dv.RuleMismatch as err:
        if err.path[: len(path)] == path:
            raise
        raise dv.RuleMismatch(path + err.path, err.expected, err.found) from None
    except dv.ParameterEscape as err:
        raise dv.ParameterEscape(err.param, path) from None
    if extra is not None and head in extra:
        return extra[head](x, path)
    raise FormatError(f"unknown or malformed rule node {dumps(x, width=60)[:60]}")


def dump_derivation(d: dv.Derivation) -> str:
    return dumps([Sym("proof"), derivation_to_sexpr(d)]) + "\n"


def load_derivation(text: str) -> dv.Derivation:
    x = loads(text)
    if _head(x) != "proof" or len(x) != 2:
        raise FormatError("a proof file is (proof D)")
    return derivation_from_sexpr(x[1])


# --- oracles ---------------------------------------------------------------


def oracle_to_sexpr(o: PreorderOracle) -> SExpr:
    if isinstance(o, ArithmeticOracle):
        return [Sym("oracle"), Sym("arithmetic")]
    if isinstance(o, FinitePreorder):
        elems = [Sym("elems")] + [formula_to_sexpr(e) for e in o.elements]
        pairs = [Sym("leq")] + [
            [formula_to_sexpr(p), formula_to_sexpr(q)] for p, q in o.pairs() if p != q
        ]
        return [Sym("oracle"), [Sym("preorder"), elems, pairs]]
    if isinstance(o, ValuationOracle):
        rows = [[formula_to_sexpr(p), Sym("true" if v else "false")] for p, v in o.valuation.items()]
        return [Sym("oracle"), [Sym("valuation")] + rows]
    raise TypeError(f"no file format for {o!r}")


def oracle_from_sexpr(x: SExpr) -> PreorderOracle:
    if _head(x) != "oracle" or len(x) != 2:
        raise FormatError("an oracle file is (oracle ...)")
    body = x[1]
    if body == Sym("arithmetic"):
        return ArithmeticOracle()
    match _head(body):
        case "preorder":
            sections = {_head(s): s[1:] for s in body[1:]}
            if "elems" not in sections:
                raise FormatError("preorder oracle needs (elems ...)")
            elems = [formula_from_sexpr(e) for e in sections["elems"]]
            pairs = []
            for pq in sections.get("leq", []):
                if not (isinstance(pq, list) and len(pq) == 2):
                    raise FormatError(f"leq entries are (p q), found {dumps(pq)}")
                p, q = formula_from_sexpr(pq[0]), formula_from_sexpr(pq[1])
                if p not in elems or q not in elems:
                    raise FormatError(f"leq pair {dumps(pq)} mentions an undeclared element")
                pairs.append((p, q))
            return FinitePreorder(elems, pairs)
        case "valuation":
            val = {}
            for row in body[1:]:
                if not (isinstance(row, list) and len(row) == 2 and row[1] in (Sym("true"), Sym("false"))):
                    raise FormatError(f"valuation rows are (p true|false), found {dumps(row)}")
                val[formula_from_sexpr(row[0])] = row[1] == Sym("true")
            return ValuationOracle(val)
    raise FormatError(f"unknown oracle {dumps(body)}")


def dump_oracle(o: PreorderOracle) -> str:
    return dumps(oracle_to_sexpr(o)) + "\n"


def load_oracle(text: str) -> PreorderOracle:
    return oracle_from_sexpr(loads(text))


def parse_formula(text: str) -> Formula:
    return formula_from_sexpr(loads(text))


def parse_sequent(text: str) -> Sequent:
    return sequent_from_sexpr(loads(text))


def parse_term(text: str) -> Term:
    return term_from_sexpr(loads(text))
