"""Formulas of the distributed know-how language, with a parser and printer.

Surface grammar (whitespace-insensitive)::

    phi   := impl
    impl  := or ( "->" impl )?
    or    := and ( "|" and )*
    and   := unary ( "&" unary )*
    unary := "~" unary | "K" group unary | "Kh" group unary | prim
    prim  := "top" | "bot" | ident | "(" phi ")"
    group := "{" ( int ( "," int )* )? "}"

``bot``, ``|`` and ``->`` are sugar and never survive parsing; the printer
only emits core connectives.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Union

Group = frozenset  # frozenset[int] of agent indices

KEYWORDS = frozenset({"top", "bot", "K", "Kh"})


def group(*members: int) -> frozenset:
    return frozenset(members)


def group_str(g: Iterable[int]) -> str:
    return "{" + ",".join(str(i) for i in sorted(g)) + "}"


def group_min(g: Iterable[int]) -> int:
    """Least agent index; used to order disjoint groups."""
    return min(g)


@dataclass(frozen=True)
class Top:
    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Not:
    sub: "Formula"

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class K:
    group: frozenset
    sub: "Formula"

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Kh:
    group: frozenset
    sub: "Formula"

    def __str__(self) -> str:
        return print_formula(self)


Formula = Union[Top, Atom, Not, And, K, Kh]

TOP = Top()
BOT = Not(TOP)


# sugar constructors


def implies(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


def disj(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def as_implication(f: Formula):
    """Return ``(a, b)`` if ``f`` is the desugared form of ``a -> b``, else None."""
    if isinstance(f, Not) and isinstance(f.sub, And) and isinstance(f.sub.right, Not):
        return f.sub.left, f.sub.right.sub
    return None


# ---------------------------------------------------------------- parsing


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<punct>[~&|(){},])|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*))"
)


def tokenize(text: str) -> List[tuple]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        tokens.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.next()
        if val != value or kind == "eof":
            raise FormulaSyntaxError(f"expected {value!r}, got {val or 'end of input'!r}", pos)

    def parse(self) -> Formula:
        f = self.impl()
        kind, val, pos = self.peek()
        if kind != "eof":
            raise FormulaSyntaxError(f"unexpected token {val!r}", pos)
        return f

    def impl(self) -> Formula:
        left = self.disj()
        if self.peek()[0] == "arrow":
            self.next()
            return implies(left, self.impl())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek()[1] == "|":
            self.next()
            f = disj(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek()[1] == "&":
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, val, pos = self.peek()
        if val == "~":
            self.next()
            return Not(self.unary())
        if kind == "ident" and val in ("K", "Kh"):
            self.next()
            g = self.group()
            sub = self.unary()
            return K(g, sub) if val == "K" else Kh(g, sub)
        return self.prim()

    def prim(self) -> Formula:
        kind, val, pos = self.next()
        if kind == "ident":
            if val == "top":
                return TOP
            if val == "bot":
                return BOT
            if val in KEYWORDS:
                raise FormulaSyntaxError(f"keyword {val!r} cannot be used here", pos)
            return Atom(val)
        if val == "(":
            f = self.impl()
            self.expect(")")
            return f
        raise FormulaSyntaxError(f"unexpected token {val or 'end of input'!r}", pos)

    def group(self) -> frozenset:
        self.expect("{")
        members: List[int] = []
        if self.peek()[1] != "}":
            while True:
                kind, val, pos = self.next()
                if kind != "int":
                    raise FormulaSyntaxError(
                        f"agent index must be a nonnegative integer, got {val!r}", pos
                    )
                agent = int(val)
                if agent in members:
                    raise FormulaSyntaxError(f"duplicate agent {agent} in group", pos)
                members.append(agent)
                if self.peek()[1] != ",":
                    break
                self.next()
        self.expect("}")
        return frozenset(members)


def parse_formula(text: str) -> Formula:
    """Parse surface syntax into a core formula (sugar removed)."""
    return _Parser(text).parse()


def parse_group(text: str) -> frozenset:
    """Parse a comma list like ``"0,1"``; the empty string is the empty group."""
    text = text.strip().strip("{}").strip()
    if not text:
        return frozenset()
    members = []
    for part in text.split(","):
        part = part.strip()
        if not part.isdigit():
            raise ValueError(f"agent index must be a nonnegative integer, got {part!r}")
        if int(part) in members:
            raise ValueError(f"duplicate agent {part} in group")
        members.append(int(part))
    return frozenset(members)


# --------------------------------------------------------------- printing

_PREC_AND = 1
_PREC_UNARY = 2


def _prec(f: Formula) -> int:
    return _PREC_AND if isinstance(f, And) else _PREC_UNARY


def print_formula(f: Formula) -> str:
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return "~" + _operand(f.sub)
    if isinstance(f, And):
        left = print_formula(f.left)
        # & is left-associative; a right-nested conjunction needs parens
        right = print_formula(f.right)
        if isinstance(f.right, And):
            right = f"({right})"
        return f"{left} & {right}"
    if isinstance(f, (K, Kh)):
        op = "K" if isinstance(f, K) else "Kh"
        sub = _operand(f.sub)
        sep = "" if sub.startswith("(") else " "
        return f"{op}{group_str(f.group)}{sep}{sub}"
    raise TypeError(f"not a formula: {f!r}")


def _operand(f: Formula) -> str:
    s = print_formula(f)
    return f"({s})" if _prec(f) < _PREC_UNARY else s


def subformulas(f: Formula) -> List[Formula]:
    """Distinct subformulas in post-order (children before parents)."""
    seen = set()
    out: List[Formula] = []

    def visit(g: Formula) -> None:
        if g in seen:
            return
        for child in children(g):
            visit(child)
        if g not in seen:
            seen.add(g)
            out.append(g)

    visit(f)
    return out


def children(f: Formula) -> Iterator[Formula]:
    if isinstance(f, (Not, K, Kh)):
        yield f.sub
    elif isinstance(f, And):
        yield f.left
        yield f.right


def atoms_of(f: Formula) -> set:
    return {g.name for g in subformulas(f) if isinstance(g, Atom)}


def agents_of(f: Formula) -> set:
    out: set = set()
    for g in subformulas(f):
        if isinstance(g, (K, Kh)):
            out |= g.group
    return out


def substitute(f: Formula, mapping: dict) -> Formula:
    """Replace proposition letters by formulas, simultaneously."""
    if isinstance(f, Atom):
        return mapping.get(f.name, f)
    if isinstance(f, Top):
        return f
    if isinstance(f, Not):
        return Not(substitute(f.sub, mapping))
    if isinstance(f, And):
        return And(substitute(f.left, mapping), substitute(f.right, mapping))
    if isinstance(f, K):
        return K(f.group, substitute(f.sub, mapping))
    return Kh(f.group, substitute(f.sub, mapping))
