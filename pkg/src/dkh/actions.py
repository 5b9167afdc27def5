"""Distributed actions available to a group, and their transitions.

Two representations are kept:

* nested terms, built by the recursive closure over non-trivial partial
  partitions of the group (an atom name, or a :class:`Joint` tuple whose
  components are ordered by the least agent of their block);
* joint actions, the flattened form: a ``frozenset`` of atom names whose
  owners are pairwise disjoint. All semantic work uses this form.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, List, Tuple, Union

from .model import Model, quotient

DEFAULT_CAP = 10_000


class EnumerationCapExceeded(RuntimeError):
    """The number of actions for a group exceeds the configured cap."""


@dataclass(frozen=True)
class Joint:
    parts: Tuple["NestedAction", ...]

    def __str__(self) -> str:
        return "<" + ",".join(str(p) for p in self.parts) + ">"


NestedAction = Union[str, Joint]


def format_nested(d: NestedAction) -> str:
    return str(d)


def format_joint(j) -> str:
    return "{" + ",".join(sorted(j)) + "}"


def joint_key(j) -> tuple:
    """Tie-break order: fewer atoms first, then lexicographic names."""
    return (len(j), sorted(j))


# ------------------------------------------------------------ nested closure


def _set_partitions(items: list) -> Iterator[List[list]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1 :]
        yield [[first]] + part


def nontrivial_partial_partitions(g) -> Iterator[List[frozenset]]:
    """Partitions of subsets of ``g`` with at least two blocks, blocks ordered by min."""
    members = sorted(g)
    for size in range(2, len(members) + 1):
        for subset in combinations(members, size):
            for part in _set_partitions(list(subset)):
                if len(part) >= 2:
                    yield sorted((frozenset(b) for b in part), key=min)


def closure_nested(m: Model, g, cap: int = DEFAULT_CAP) -> frozenset:
    """The recursive closure of nested distributed actions for group ``g``."""
    g = frozenset(g)
    m.check_group(g)
    key = ("nested", g, cap)
    if key in m._cache:
        return m._cache[key]
    out = {a.name for a in m.actions_within(g)}
    for blocks in nontrivial_partial_partitions(g):
        components = [closure_nested(m, b, cap) for b in blocks]
        if any(not c for c in components):
            continue
        count = 1
        for c in components:
            count *= len(c)
        if count > cap:
            raise EnumerationCapExceeded(
                f"more than {cap} nested actions for group {sorted(g)}"
            )
        for combo in product(*(sorted(c, key=str) for c in components)):
            out.add(Joint(tuple(combo)))
        if len(out) > cap:
            raise EnumerationCapExceeded(f"more than {cap} nested actions for group {sorted(g)}")
    result = frozenset(out)
    m._cache[key] = result
    return result


def flatten(d: NestedAction) -> frozenset:
    if isinstance(d, str):
        return frozenset([d])
    out: set = set()
    for part in d.parts:
        out |= flatten(part)
    return frozenset(out)


def nested_transition(m: Model, d: NestedAction) -> frozenset:
    """Transition of a nested term by direct recursion on its structure."""
    if isinstance(d, str):
        return m.action(d).moves
    rel = None
    for part in d.parts:
        sub = nested_transition(m, part)
        rel = sub if rel is None else rel & sub
    return rel


# ------------------------------------------------------------ joint actions


def canonical_actions(m: Model, g, cap: int = DEFAULT_CAP) -> List[frozenset]:
    """All nonempty atom sets with pairwise-disjoint owners inside ``g``.

    Returned in tie-break order (see :func:`joint_key`).
    """
    g = frozenset(g)
    m.check_group(g)
    key = ("canonical", g, cap)
    if key in m._cache:
        return m._cache[key]
    atoms = sorted(m.actions_within(g), key=lambda a: a.name)
    out: List[frozenset] = []

    def extend(start: int, chosen: list, used: frozenset) -> None:
        for k in range(start, len(atoms)):
            a = atoms[k]
            if a.owner & used:
                continue
            chosen.append(a.name)
            out.append(frozenset(chosen))
            if len(out) > cap:
                raise EnumerationCapExceeded(
                    f"more than {cap} joint actions for group {sorted(g)}"
                )
            extend(k + 1, chosen, used | a.owner)
            chosen.pop()

    extend(0, [], frozenset())
    out.sort(key=joint_key)
    m._cache[key] = out
    return out


def transition(m: Model, j) -> frozenset:
    """Intersection of the member atoms' move relations."""
    key = ("transition", frozenset(j))
    if key not in m._cache:
        rel = None
        for name in sorted(j):
            moves = m.action(name).moves
            rel = moves if rel is None else rel & moves
        m._cache[key] = frozenset() if rel is None else rel
    return m._cache[key]


def successors(m: Model, j, s: int) -> frozenset:
    return frozenset(t for (x, t) in transition(m, j) if x == s)


def executable_on(m: Model, j, x) -> bool:
    sources = {s for (s, _) in transition(m, j)}
    return all(s in sources for s in x)


def class_successors(m: Model, g, x, j) -> frozenset:
    """Classes ``Y`` of ``g`` reachable from class ``x`` by some ``j``-move."""
    targets = {t for (s, t) in transition(m, j) if s in x}
    return frozenset(cls for cls in quotient(m, g) if cls & targets)
