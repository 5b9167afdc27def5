"""Finite models with group-owned atomic actions.

States are integer indices into ``Model.state_names``. Epistemic relations
are stored per agent as a block label for every state, so each relation is
an equivalence by construction. An equivalence class of a group is a
``frozenset`` of state indices.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Tuple


class ModelError(ValueError):
    """Raised when a model document violates a model invariant."""


@dataclass(frozen=True)
class AtomicAction:
    name: str
    owner: frozenset
    moves: frozenset  # of (from, to) state index pairs


@dataclass(frozen=True)
class Model:
    agent_count: int
    state_names: Tuple[str, ...]
    # blocks[i][s] is the block label of state s in agent i's partition
    blocks: Tuple[Tuple[int, ...], ...]
    actions: Tuple[AtomicAction, ...]
    valuation: Dict[str, frozenset] = field(hash=False)
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def states(self) -> range:
        return range(len(self.state_names))

    @property
    def all_states(self) -> frozenset:
        return frozenset(self.states)

    def state_index(self, name: str) -> int:
        try:
            return self.state_names.index(name)
        except ValueError:
            raise ModelError(f"unknown state {name!r}") from None

    def action(self, name: str) -> AtomicAction:
        for a in self.actions:
            if a.name == name:
                return a
        raise ModelError(f"unknown action {name!r}")

    def check_group(self, g) -> None:
        for i in g:
            if not 0 <= i < self.agent_count:
                raise ModelError(
                    f"agent index {i} out of range for a model with {self.agent_count} agents"
                )

    def actions_within(self, g) -> List[AtomicAction]:
        """Atomic actions whose owner is a subset of ``g``."""
        return [a for a in self.actions if a.owner <= g]


def validate_model(doc: dict) -> Model:
    """Build a :class:`Model` from a parsed model document, checking invariants."""
    try:
        n = doc["agents"]
        names = doc["states"]
    except KeyError as exc:
        raise ModelError(f"missing field {exc.args[0]!r}") from None
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ModelError("'agents' must be an integer >= 1")
    if not names:
        raise ModelError("model needs at least one state")
    if len(set(names)) != len(names):
        raise ModelError("duplicate state name")
    index = {name: i for i, name in enumerate(names)}

    def lookup(name) -> int:
        if name not in index:
            raise ModelError(f"unknown state {name!r}")
        return index[name]

    blocks: List[Tuple[int, ...]] = []
    epistemic = doc.get("epistemic", {}) or {}
    parsed: Dict[int, list] = {}
    for key, partition in epistemic.items():
        try:
            agent = int(key)
        except (TypeError, ValueError):
            raise ModelError(f"agent key {key!r} is not an integer") from None
        if not 0 <= agent < n:
            raise ModelError(f"agent index {agent} out of range")
        if agent in parsed:
            raise ModelError(f"agent {agent} listed twice")
        parsed[agent] = partition
    for agent in range(n):
        label = [-1] * len(names)
        next_label = 0
        for block in parsed.get(agent, []):
            if not block:
                raise ModelError(f"empty block for agent {agent}")
            for name in block:
                s = lookup(name)
                if label[s] != -1:
                    raise ModelError(f"overlapping blocks for agent {agent} at state {name!r}")
                label[s] = next_label
            next_label += 1
        for s in range(len(names)):
            if label[s] == -1:
                label[s] = next_label
                next_label += 1
        # number blocks by first occurrence so equal partitions compare equal
        renumber: Dict[int, int] = {}
        blocks.append(tuple(renumber.setdefault(b, len(renumber)) for b in label))

    actions: List[AtomicAction] = []
    seen = set()
    for entry in doc.get("actions", []) or []:
        name = entry.get("name")
        if not isinstance(name, str) or not name:
            raise ModelError("action without a name")
        if name in seen:
            raise ModelError(f"duplicate action name {name!r}")
        seen.add(name)
        owner = entry.get("owner", [])
        if not owner:
            raise ModelError(f"empty owner group for action {name!r}")
        if len(set(owner)) != len(owner):
            raise ModelError(f"duplicate agent in owner of {name!r}")
        for i in owner:
            if not isinstance(i, int) or not 0 <= i < n:
                raise ModelError(f"agent index {i!r} out of range in owner of {name!r}")
        moves = set()
        for pair in entry.get("moves", []) or []:
            if len(pair) != 2:
                raise ModelError(f"move of {name!r} is not a pair: {pair!r}")
            moves.add((lookup(pair[0]), lookup(pair[1])))
        actions.append(AtomicAction(name, frozenset(owner), frozenset(moves)))

    valuation = {}
    for prop, states in (doc.get("valuation", {}) or {}).items():
        valuation[prop] = frozenset(lookup(s) for s in states)

    return Model(n, tuple(names), tuple(blocks), tuple(actions), valuation)


def load_model(path) -> Model:
    with open(path) as fh:
        return validate_model(json.load(fh))


def model_to_document(m: Model) -> dict:
    """Inverse of :func:`validate_model` (singleton blocks omitted)."""
    epistemic = {}
    for agent, labels in enumerate(m.blocks):
        groups: Dict[int, list] = {}
        for s, b in enumerate(labels):
            groups.setdefault(b, []).append(m.state_names[s])
        multi = [blk for blk in groups.values() if len(blk) > 1]
        if multi:
            epistemic[str(agent)] = multi
    return {
        "agents": m.agent_count,
        "states": list(m.state_names),
        "valuation": {
            p: [m.state_names[s] for s in sorted(v)] for p, v in sorted(m.valuation.items())
        },
        "epistemic": epistemic,
        "actions": [
            {
                "name": a.name,
                "owner": sorted(a.owner),
                "moves": [[m.state_names[x], m.state_names[y]] for x, y in sorted(a.moves)],
            }
            for a in m.actions
        ],
    }


def class_of(m: Model, g, s: int) -> frozenset:
    """The class ``[s]_g``: states every member of ``g`` confuses with ``s``."""
    for cls in quotient(m, g):
        if s in cls:
            return cls
    raise ModelError(f"state {s} out of range")


def quotient(m: Model, g) -> List[frozenset]:
    """All ``g``-classes, ordered by their least state index."""
    g = frozenset(g)
    key = ("quotient", g)
    if key not in m._cache:
        m.check_group(g)
        members = sorted(g)
        by_sig: Dict[tuple, list] = {}
        for s in m.states:
            sig = tuple(m.blocks[i][s] for i in members)
            by_sig.setdefault(sig, []).append(s)
        m._cache[key] = [frozenset(v) for v in by_sig.values()]
    return m._cache[key]


def class_rep(m: Model, cls) -> str:
    """Lexicographically least state name in a class."""
    return min(m.state_names[s] for s in cls)


def format_class(m: Model, cls) -> str:
    return "{" + ",".join(sorted(m.state_names[s] for s in cls)) + "}"
