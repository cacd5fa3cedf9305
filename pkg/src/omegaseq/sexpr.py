"""Minimal S-expression reader and printer shared by every file kind."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Sym:
    name: str

    def __str__(self) -> str:
        return self.name


SExpr = Union[Sym, int, list]

_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s();]+")


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


def _tokens(text: str):
    offset = 0
    while offset < len(text):
        m = _TOKEN.match(text, offset)
        tok = m.group()
        if not tok[0].isspace() and tok[0] != ";":
            yield tok, offset
        offset = m.end()


def _atom(tok: str) -> SExpr:
    if tok.isdigit():
        return int(tok)
    return Sym(tok)


def loads_all(text: str) -> list[SExpr]:
    """Parse every top-level expression in ``text``."""
    stack: list[tuple[list, int]] = []
    out: list[SExpr] = []
    for tok, offset in _tokens(text):
        if tok == "(":
            stack.append(([], offset))
        elif tok == ")":
            if not stack:
                raise ParseError("unbalanced ')'", *_position(text, offset))
            done, _ = stack.pop()
            (stack[-1][0] if stack else out).append(done)
        else:
            (stack[-1][0] if stack else out).append(_atom(tok))
    if stack:
        raise ParseError("unclosed '('", *_position(text, stack[-1][1]))
    return out


def loads(text: str) -> SExpr:
    exprs = loads_all(text)
    if not exprs:
        raise ParseError("empty input", 1, 1)
    if len(exprs) > 1:
        raise ParseError("trailing input after first expression", 1, 1)
    return exprs[0]


def dumps(x: SExpr, width: int = 80, indent: int = 0) -> str:
    """Canonical printing: flat when it fits in ``width``, otherwise one child per line."""
    flat = _flat(x)
    if len(flat) + indent <= width or not isinstance(x, list) or len(x) < 2:
        return flat
    head, *rest = x
    pad = " " * (indent + 2)
    parts = [dumps(r, width, indent + 2) for r in rest]
    return "(" + _flat(head) + "".join("\n" + pad + p for p in parts) + ")"


def _flat(x: SExpr) -> str:
    if isinstance(x, list):
        return "(" + " ".join(_flat(y) for y in x) + ")"
    if isinstance(x, bool):
        raise TypeError("booleans are not S-expression atoms")
    return str(x)
