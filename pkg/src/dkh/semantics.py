"""Model checking for the distributed know-how language.

``Kh_G phi`` is decided by a least fixpoint on the ``~_G`` quotient: a class
wins at rank 0 if it lies inside the goal, and at rank r+1 if some joint
action is executable on it and all its successor classes already win at
rank <= r. Strategies are checked independently by analysing the reachable
class graph, and :func:`kh_bruteforce` enumerates every strategy outright.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, List, Optional

from .actions import (
    DEFAULT_CAP,
    canonical_actions,
    class_successors,
    executable_on,
    transition,
)
from .model import Model, ModelError, class_of, class_rep, quotient
from .syntax import And, Atom, Formula, K, Kh, Not, Top, subformulas


class StrategyError(ValueError):
    """A strategy assigns an action it is not allowed to assign."""


class OracleGuardExceeded(RuntimeError):
    pass


@dataclass
class Strategy:
    group: frozenset
    assignment: Dict[frozenset, frozenset] = field(default_factory=dict)

    @property
    def domain(self) -> frozenset:
        return frozenset(self.assignment)


@dataclass
class StrategyVerdict:
    terminating: bool
    leaves: frozenset
    inners: frozenset
    bad_leaf: Optional[frozenset] = None
    cycle_witness: Optional[List[frozenset]] = None

    @property
    def success(self) -> bool:
        return self.terminating and self.bad_leaf is None


@dataclass
class KhWitness:
    winning: frozenset
    rank: Dict[frozenset, int]
    strategy: Strategy


# ----------------------------------------------------------------- evaluation


def eval_formula(m: Model, f: Formula, cap: int = DEFAULT_CAP) -> frozenset:
    """The set of states where ``f`` holds."""
    cache = m._cache.setdefault(("eval", cap), {})
    for sub in subformulas(f):
        if sub in cache:
            continue
        cache[sub] = _eval_node(m, sub, cache, cap)
    return cache[f]


def _eval_node(m: Model, f: Formula, done: dict, cap: int) -> frozenset:
    if isinstance(f, Top):
        return m.all_states
    if isinstance(f, Atom):
        if f.name not in m.valuation:
            warnings.warn(f"unknown proposition {f.name!r} is false everywhere", stacklevel=4)
            return frozenset()
        return m.valuation[f.name]
    if isinstance(f, Not):
        return m.all_states - done[f.sub]
    if isinstance(f, And):
        return done[f.left] & done[f.right]
    if isinstance(f, K):
        inner = done[f.sub]
        return frozenset().union(*[c for c in quotient(m, f.group) if c <= inner])
    if isinstance(f, Kh):
        w = kh_winning(m, f.group, done[f.sub], cap)
        return frozenset().union(*w.winning)
    raise TypeError(f"not a formula: {f!r}")


def holds(m: Model, s: int, f: Formula, cap: int = DEFAULT_CAP) -> bool:
    return s in eval_formula(m, f, cap)


# ------------------------------------------------------------- Kh fixpoint


def _class_options(m: Model, g: frozenset, cap: int) -> Dict[frozenset, list]:
    """Per class, the executable joint actions with their successor classes.

    Actions with the same successor set on a class are interchangeable for
    the fixpoint; only the first in tie-break order is kept.
    """
    key = ("options", g, cap)
    if key in m._cache:
        return m._cache[key]
    acts = [j for j in canonical_actions(m, g, cap) if transition(m, j)]
    options = {}
    for x in quotient(m, g):
        seen = set()
        opts = []
        for j in acts:
            if not executable_on(m, j, x):
                continue
            succ = class_successors(m, g, x, j)
            if succ in seen:
                continue
            seen.add(succ)
            opts.append((j, succ))
        options[x] = opts
    m._cache[key] = options
    return options


def kh_winning(m: Model, g, goal, cap: int = DEFAULT_CAP) -> KhWitness:
    """Least fixpoint of classes from which ``g`` can force reaching ``goal``."""
    g = frozenset(g)
    goal = frozenset(goal)
    key = ("kh", g, goal, cap)
    if key in m._cache:
        return m._cache[key]
    classes = quotient(m, g)
    options = _class_options(m, g, cap)
    rank = {x: 0 for x in classes if x <= goal}
    assignment: Dict[frozenset, frozenset] = {}
    r = 0
    while True:
        r += 1
        new = {}
        for x in classes:
            if x in rank:
                continue
            for j, succ in options[x]:
                if all(y in rank for y in succ):
                    new[x] = j
                    break
        if not new:
            break
        for x, j in new.items():
            rank[x] = r
            assignment[x] = j
    w = KhWitness(frozenset(rank), rank, Strategy(g, assignment))
    m._cache[key] = w
    return w


def synthesize_strategy(
    m: Model, s: int, g, f: Formula, cap: int = DEFAULT_CAP
) -> Optional[Strategy]:
    """A witness strategy for ``Kh_g f`` at ``s``, trimmed to reachable classes."""
    g = frozenset(g)
    w = kh_winning(m, g, eval_formula(m, f, cap), cap)
    start = class_of(m, g, s)
    if start not in w.winning:
        return None
    full = w.strategy.assignment
    kept: Dict[frozenset, frozenset] = {}
    stack = [start]
    seen = {start}
    while stack:
        x = stack.pop()
        if x not in full:
            continue
        kept[x] = full[x]
        for y in class_successors(m, g, x, full[x]):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return Strategy(g, kept)


# ------------------------------------------------------ strategy verification


def _analyze(start, step: Callable, domain) -> tuple:
    """Explore the class graph from ``start``; return (reachable, cycle or None).

    ``step(x)`` gives the successor classes of a domain class ``x``.
    Non-domain classes are sinks.
    """
    # iterative DFS with colours; a back edge closes a cycle through domain classes
    WHITE, GREY, BLACK = 0, 1, 2
    colour = {start: GREY}
    path = [start]
    iters = [iter(step(start)) if start in domain else iter(())]
    cycle = None
    while iters:
        try:
            y = next(iters[-1])
        except StopIteration:
            colour[path.pop()] = BLACK
            iters.pop()
            continue
        c = colour.get(y, WHITE)
        if c == GREY:
            if cycle is None:
                cycle = path[path.index(y) :] + [y]
            continue
        if c == BLACK:
            continue
        colour[y] = GREY
        path.append(y)
        iters.append(iter(step(y)) if y in domain else iter(()))
    return frozenset(colour), cycle


def check_strategy(m: Model, g, sigma: Strategy, cap: int = DEFAULT_CAP) -> None:
    """Raise :class:`StrategyError` unless ``sigma`` is a strategy of ``g``."""
    g = frozenset(g)
    if frozenset(sigma.group) != g:
        raise StrategyError(f"strategy is for group {sorted(sigma.group)}, not {sorted(g)}")
    classes = set(quotient(m, g))
    allowed = set(canonical_actions(m, g, cap))
    for x, j in sigma.assignment.items():
        if x not in classes:
            raise StrategyError(f"{sorted(x)} is not a class of group {sorted(g)}")
        if frozenset(j) not in allowed:
            raise StrategyError(f"action {sorted(j)} is not available to group {sorted(g)}")
        if not executable_on(m, j, x):
            raise StrategyError(f"action {sorted(j)} is not executable on class {sorted(x)}")


def verify_strategy(
    m: Model, g, sigma: Strategy, s: int, goal, cap: int = DEFAULT_CAP
) -> StrategyVerdict:
    """Analyse the complete executions of ``sigma`` from ``[s]_g``."""
    g = frozenset(g)
    goal = frozenset(goal)
    check_strategy(m, g, sigma, cap)
    start = class_of(m, g, s)
    assignment = sigma.assignment

    def step(x):
        return sorted(class_successors(m, g, x, assignment[x]), key=min)

    reachable, cycle = _analyze(start, step, assignment)
    leaves = frozenset(x for x in reachable if x not in assignment)
    inners = reachable - leaves
    bad = [x for x in leaves if not x <= goal]
    return StrategyVerdict(
        terminating=cycle is None,
        leaves=leaves,
        inners=inners,
        bad_leaf=min(bad, key=min) if bad else None,
        cycle_witness=cycle,
    )


# ---------------------------------------------------------- brute-force oracle

ORACLE_MAX_CLASSES = 6
ORACLE_MAX_ACTIONS = 8


def eval_bruteforce(
    m: Model,
    f: Formula,
    max_classes: int = ORACLE_MAX_CLASSES,
    max_actions: int = ORACLE_MAX_ACTIONS,
) -> frozenset:
    """Evaluate ``f`` with every ``Kh`` decided by strategy enumeration."""
    done: dict = {}
    for sub in subformulas(f):
        if isinstance(sub, Kh):
            out = set()
            for x in quotient(m, sub.group):
                if _kh_enumerate(m, min(x), sub.group, done[sub.sub], max_classes, max_actions):
                    out |= x
            done[sub] = frozenset(out)
        elif isinstance(sub, K):
            out = set()
            for s in m.states:
                if class_of(m, sub.group, s) <= done[sub.sub]:
                    out.add(s)
            done[sub] = frozenset(out)
        else:
            done[sub] = _eval_node(m, sub, done, DEFAULT_CAP)
    return done[f]


def _kh_enumerate(
    m: Model, s: int, g, goal: frozenset, max_classes: int, max_actions: int
) -> bool:
    g = frozenset(g)
    classes = quotient(m, g)
    acts = canonical_actions(m, g)
    if len(classes) > max_classes or len(acts) > max_actions:
        raise OracleGuardExceeded(
            f"{len(classes)} classes / {len(acts)} joint actions exceed the oracle guard"
        )
    choices = [[None] + [j for j in acts if executable_on(m, j, x)] for x in classes]
    for combo in product(*choices):
        sigma = Strategy(g, {x: j for x, j in zip(classes, combo) if j is not None})
        if verify_strategy(m, g, sigma, s, goal).success:
            return True
    return False


def kh_bruteforce(
    m: Model,
    s: int,
    g,
    f: Formula,
    max_classes: int = ORACLE_MAX_CLASSES,
    max_actions: int = ORACLE_MAX_ACTIONS,
) -> bool:
    """Does some strategy of ``g`` witness ``Kh_g f`` at ``s``? Decided by enumeration.

    Raises :class:`OracleGuardExceeded` when a group involved has more than
    ``max_classes`` classes or ``max_actions`` joint actions.
    """
    goal = eval_bruteforce(m, f, max_classes, max_actions)
    return _kh_enumerate(m, s, g, goal, max_classes, max_actions)


# ------------------------------------------------------------ strategy files


def strategy_to_document(m: Model, sigma: Strategy) -> dict:
    entries = [
        {"class_rep": class_rep(m, x), "action": sorted(j)} for x, j in sigma.assignment.items()
    ]
    entries.sort(key=lambda e: e["class_rep"])
    return {"group": sorted(sigma.group), "map": entries}


def strategy_from_document(m: Model, doc: dict) -> Strategy:
    try:
        g = frozenset(doc["group"])
        entries = doc["map"]
    except (KeyError, TypeError):
        raise StrategyError("strategy document needs 'group' and 'map'") from None
    if len(g) != len(doc["group"]):
        raise StrategyError("duplicate agent in strategy group")
    m.check_group(g)
    assignment = {}
    for e in entries:
        try:
            x = class_of(m, g, m.state_index(e["class_rep"]))
        except ModelError as exc:
            raise StrategyError(str(exc)) from None
        if x in assignment:
            raise StrategyError(f"class of {e['class_rep']!r} assigned twice")
        assignment[x] = frozenset(e["action"])
    return Strategy(g, assignment)
