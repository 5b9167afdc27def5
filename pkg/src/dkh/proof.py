"""Checking Hilbert-style derivations.

A derivation file has one step per line::

    <index>: <formula> ; <justification>

where the justification is an axiom name (``TAUT``, ``DISTK``, ``T``,
``4``, ``5``, ``AxKMono``, ...) or a rule: ``MP i j`` (line ``j`` is
``line_i -> this``) or ``NECK i`` (this is ``K_G line_i``).
Blank lines and lines starting with ``#`` are ignored.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, List, Optional, Tuple

from .syntax import (
    BOT,
    And,
    Atom,
    Formula,
    K,
    Kh,
    Not,
    Top,
    as_implication,
    implies,
    parse_formula,
)

AXIOMS = (
    "TAUT",
    "DISTK",
    "T",
    "Four",
    "Five",
    "AxKMono",
    "AxKhMono",
    "AxKtoKh",
    "AxEmpKhtoK",
    "AxKhtoKKh",
    "AxEmpMono",
    "AxKhbot",
    "AxKhtoKhK",
    "AxKhKh",
)
RULES = ("MP", "NECK")
_ALIASES = {"4": "Four", "5": "Five"}

MAX_TAUT_ATOMS = 12


class DerivationError(ValueError):
    """Malformed derivation text or justification."""


class TooManyAtoms(ValueError):
    pass


@dataclass(frozen=True)
class Justification:
    name: str
    refs: Tuple[int, ...] = ()

    def __str__(self) -> str:
        return " ".join([self.name, *map(str, self.refs)])


@dataclass(frozen=True)
class Line:
    index: int
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class LineVerdict:
    index: int
    ok: bool
    reason: str = ""


# ---------------------------------------------------------------- tautologies


def is_tautology_instance(f: Formula) -> bool:
    """Propositional validity after abstracting modal subformulas to atoms."""
    table: Dict[Formula, int] = {}

    def abstract(g: Formula):
        if isinstance(g, Top):
            return g
        if isinstance(g, (Atom, K, Kh)):
            return table.setdefault(g, len(table))
        if isinstance(g, Not):
            return ("not", abstract(g.sub))
        return ("and", abstract(g.left), abstract(g.right))

    shape = abstract(f)
    if len(table) > MAX_TAUT_ATOMS:
        raise TooManyAtoms(f"{len(table)} propositional atoms exceed the limit of {MAX_TAUT_ATOMS}")

    def value(node, row) -> bool:
        if isinstance(node, Top):
            return True
        if isinstance(node, int):
            return row[node]
        if node[0] == "not":
            return not value(node[1], row)
        return value(node[1], row) and value(node[2], row)

    return all(value(shape, row) for row in product((False, True), repeat=len(table)))


# ------------------------------------------------------------------- schemas


def _k(f, cls=K):
    return (f.group, f.sub) if isinstance(f, cls) else None


def _kh(f):
    return _k(f, Kh)


def _imp(f):
    return as_implication(f)


def _distk(f) -> bool:
    parts = _imp(f)
    if not parts or not isinstance(parts[0], And):
        return False
    left, right = parts[0].left, parts[0].right
    a, b, c = _k(left), _k(right), _k(parts[1])
    if not (a and b and c) or not (a[0] == b[0] == c[0]):
        return False
    inner = _imp(b[1])
    return inner is not None and inner == (a[1], c[1])


def _t(f) -> bool:
    parts = _imp(f)
    if not parts:
        return False
    a = _k(parts[0])
    return a is not None and a[1] == parts[1]


def _four(f) -> bool:
    parts = _imp(f)
    if not parts:
        return False
    a, b = _k(parts[0]), _k(parts[1])
    return bool(a and b) and a[0] == b[0] and b[1] == parts[0]


def _five(f) -> bool:
    parts = _imp(f)
    if not parts or not isinstance(parts[0], Not):
        return False
    a, b = _k(parts[0].sub), _k(parts[1])
    return bool(a and b) and a[0] == b[0] and b[1] == parts[0]


def _mono(op) -> Callable:
    def check(f) -> bool:
        parts = _imp(f)
        if not parts:
            return False
        a, b = op(parts[0]), op(parts[1])
        return bool(a and b) and a[1] == b[1] and a[0] <= b[0]

    return check


def _ktokh(f) -> bool:
    parts = _imp(f)
    if not parts:
        return False
    a, b = _k(parts[0]), _kh(parts[1])
    return bool(a and b) and a == b


def _empkhtok(f) -> bool:
    parts = _imp(f)
    if not parts:
        return False
    a, b = _kh(parts[0]), _k(parts[1])
    return bool(a and b) and a == b and not a[0]


def _khtokkh(f) -> bool:
    parts = _imp(f)
    if not parts:
        return False
    a, b = _kh(parts[0]), _k(parts[1])
    return bool(a and b) and a[0] == b[0] and b[1] == parts[0]


def _empmono(f) -> bool:
    parts = _imp(f)
    if not parts:
        return False
    a, b = _k(parts[0]), _k(parts[1])
    if not (a and b) or a[0] or b[0]:
        return False
    outer, inner = _imp(a[1]), _imp(b[1])
    if not (outer and inner):
        return False
    x, y = _kh(inner[0]), _kh(inner[1])
    return bool(x and y) and x[0] == y[0] and (x[1], y[1]) == outer


def _khbot(f) -> bool:
    parts = _imp(f)
    if not parts or parts[1] != BOT:
        return False
    a = _kh(parts[0])
    return a is not None and a[1] == BOT


def _khtokhk(f) -> bool:
    parts = _imp(f)
    if not parts:
        return False
    a, b = _kh(parts[0]), _kh(parts[1])
    if not (a and b) or a[0] != b[0]:
        return False
    c = _k(b[1])
    return c is not None and c == a


def _khkh(f) -> bool:
    parts = _imp(f)
    if not parts:
        return False
    a, b = _kh(parts[0]), _kh(parts[1])
    if not (a and b) or a[0] != b[0]:
        return False
    return _kh(a[1]) == b


_MATCHERS: Dict[str, Callable[[Formula], bool]] = {
    "TAUT": is_tautology_instance,
    "DISTK": _distk,
    "T": _t,
    "Four": _four,
    "Five": _five,
    "AxKMono": _mono(_k),
    "AxKhMono": _mono(_kh),
    "AxKtoKh": _ktokh,
    "AxEmpKhtoK": _empkhtok,
    "AxKhtoKKh": _khtokkh,
    "AxEmpMono": _empmono,
    "AxKhbot": _khbot,
    "AxKhtoKhK": _khtokhk,
    "AxKhKh": _khkh,
}


def match_schema(f: Formula, name) -> bool:
    """Is ``f`` an instance of the named axiom schema (side conditions included)?"""
    if isinstance(name, Justification):
        name = name.name
    name = _ALIASES.get(name, name)
    if name not in _MATCHERS:
        raise DerivationError(f"{name!r} is not an axiom")
    return _MATCHERS[name](f)


# ---------------------------------------------------------------- derivations


def parse_justification(text: str) -> Justification:
    tokens = text.split()
    if not tokens:
        raise DerivationError("missing justification")
    name = _ALIASES.get(tokens[0], tokens[0])
    args = tokens[1:]
    if name in _MATCHERS:
        if args:
            raise DerivationError(f"axiom {name} takes no line references")
        return Justification(name)
    arity = {"MP": 2, "NECK": 1}.get(name)
    if arity is None:
        raise DerivationError(f"unknown justification {tokens[0]!r}")
    if len(args) != arity or not all(a.isdigit() for a in args):
        raise DerivationError(f"{name} needs {arity} line number(s)")
    return Justification(name, tuple(int(a) for a in args))


def parse_derivation(text: str) -> List[Line]:
    lines: List[Line] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        raw = raw.strip()
        if not raw or raw.startswith("#"):
            continue
        head, sep, rest = raw.partition(":")
        if not sep or not head.strip().isdigit():
            raise DerivationError(f"line {lineno}: expected '<index>: <formula> ; <justification>'")
        body, sep, just = rest.rpartition(";")
        if not sep:
            raise DerivationError(f"line {lineno}: missing ';' before the justification")
        index = int(head)
        if lines and index <= lines[-1].index:
            raise DerivationError(f"line {lineno}: indices must increase")
        lines.append(Line(index, parse_formula(body), parse_justification(just)))
    return lines


def check_derivation(lines: List[Line]) -> List[LineVerdict]:
    """Check every line; forward or unknown references raise DerivationError."""
    by_index: Dict[int, Formula] = {}
    verdicts = []
    for line in lines:
        j = line.justification
        for ref in j.refs:
            if ref not in by_index:
                raise DerivationError(f"line {line.index}: reference to line {ref} is not earlier")
        verdicts.append(_check_line(line, by_index))
        by_index[line.index] = line.formula
    return verdicts


def _check_line(line: Line, earlier: Dict[int, Formula]) -> LineVerdict:
    j, f = line.justification, line.formula
    if j.name == "MP":
        premise, major = earlier[j.refs[0]], earlier[j.refs[1]]
        if as_implication(major) == (premise, f):
            return LineVerdict(line.index, True)
        return LineVerdict(line.index, False, f"line {j.refs[1]} is not line {j.refs[0]} -> this")
    if j.name == "NECK":
        if isinstance(f, K) and f.sub == earlier[j.refs[0]]:
            return LineVerdict(line.index, True)
        return LineVerdict(line.index, False, f"not K_G of line {j.refs[0]}")
    try:
        ok = match_schema(f, j.name)
    except TooManyAtoms as exc:
        return LineVerdict(line.index, False, str(exc))
    return LineVerdict(line.index, ok, "" if ok else f"not an instance of {j.name}")


def check_text(text: str) -> List[LineVerdict]:
    return check_derivation(parse_derivation(text))


MONOKH_DERIVATION = """\
1: p -> p ; TAUT
2: K{}(p -> p) ; NECK 1
3: K{}(p -> p) -> K{}(Kh{0}p -> Kh{0}p) ; AxEmpMono
4: K{}(Kh{0}p -> Kh{0}p) ; MP 2 3
5: K{}(Kh{0}p -> Kh{0}p) -> (Kh{0}p -> Kh{0}p) ; T
6: Kh{0}p -> Kh{0}p ; MP 4 5
"""


def instantiate(name: str, phi: Formula, psi: Formula, g, h=None) -> Optional[Formula]:
    """Build an instance of a named schema from metavariable values.

    ``h`` is the larger group for the monotonicity schemas. Returns None for
    TAUT, which has no fixed shape.
    """
    g = frozenset(g)
    h = g if h is None else frozenset(h)
    e = frozenset()
    name = _ALIASES.get(name, name)
    builders = {
        "DISTK": lambda: implies(And(K(g, phi), K(g, implies(phi, psi))), K(g, psi)),
        "T": lambda: implies(K(g, phi), phi),
        "Four": lambda: implies(K(g, phi), K(g, K(g, phi))),
        "Five": lambda: implies(Not(K(g, phi)), K(g, Not(K(g, phi)))),
        "AxKMono": lambda: implies(K(g, phi), K(h, phi)),
        "AxKhMono": lambda: implies(Kh(g, phi), Kh(h, phi)),
        "AxKtoKh": lambda: implies(K(g, phi), Kh(g, phi)),
        "AxEmpKhtoK": lambda: implies(Kh(e, phi), K(e, phi)),
        "AxKhtoKKh": lambda: implies(Kh(g, phi), K(g, Kh(g, phi))),
        "AxEmpMono": lambda: implies(
            K(e, implies(phi, psi)), K(e, implies(Kh(g, phi), Kh(g, psi)))
        ),
        "AxKhbot": lambda: implies(Kh(g, BOT), BOT),
        "AxKhtoKhK": lambda: implies(Kh(g, phi), Kh(g, K(g, phi))),
        "AxKhKh": lambda: implies(Kh(g, Kh(g, phi)), Kh(g, phi)),
    }
    if name == "TAUT":
        return None
    return builders[name]()
