"""Random models and formulas, the soundness sweep, and countermodel search."""
from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, List, Optional, Tuple, Union

from .actions import EnumerationCapExceeded
from .model import Model, model_to_document, validate_model
from .proof import AXIOMS, instantiate, is_tautology_instance, match_schema
from .semantics import eval_formula
from .syntax import (
    TOP,
    And,
    Atom,
    Formula,
    K,
    Kh,
    Not,
    agents_of,
    atoms_of,
    implies,
    parse_formula,
    print_formula,
    substitute,
)

Evaluator = Callable[[Model, Formula], frozenset]


@dataclass(frozen=True)
class GenParams:
    seed: int = 0
    state_count: Tuple[int, int] = (2, 6)
    agent_count: Tuple[int, int] = (1, 3)
    atoms_per_group: Tuple[int, int] = (0, 2)
    props: Tuple[int, int] = (1, 3)
    transition_density: float = 0.3
    formula_depth: Tuple[int, int] = (0, 3)
    multi_owner_prob: float = 0.2

    def __post_init__(self):
        for name in ("state_count", "agent_count", "atoms_per_group", "props", "formula_depth"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name}: empty range {lo}..{hi}")
        if self.state_count[0] < 1 or self.agent_count[0] < 1:
            raise ValueError("need at least one state and one agent")
        if not 0 <= self.transition_density <= 1 or not 0 <= self.multi_owner_prob <= 1:
            raise ValueError("probabilities must lie in [0, 1]")


PROP_NAMES = "pqrstuvw"


def random_model(p: GenParams) -> Model:
    """A validated random model, fully determined by ``p.seed``."""
    rng = random.Random(p.seed)
    n_states = rng.randint(*p.state_count)
    n_agents = rng.randint(*p.agent_count)
    names = [f"w{i}" for i in range(n_states)]

    epistemic = {}
    for agent in range(n_agents):
        blocks = [[s] for s in names]
        for _ in range(rng.randint(0, n_states - 1)):
            if len(blocks) < 2:
                break
            a, b = rng.sample(range(len(blocks)), 2)
            blocks[a] += blocks[b]
            del blocks[b]
        epistemic[str(agent)] = [sorted(b) for b in blocks]

    actions = []
    for agent in range(n_agents):
        for _ in range(rng.randint(*p.atoms_per_group)):
            if n_agents > 1 and rng.random() < p.multi_owner_prob:
                size = rng.randint(2, n_agents)
                owner = sorted(rng.sample(range(n_agents), size))
            else:
                owner = [agent]
            moves = [
                [x, y] for x in names for y in names if rng.random() < p.transition_density
            ]
            actions.append({"name": f"a{len(actions)}", "owner": owner, "moves": moves})

    props = PROP_NAMES[: rng.randint(*p.props)]
    valuation = {q: [s for s in names if rng.random() < 0.5] for q in props}
    doc = {
        "agents": n_agents,
        "states": names,
        "valuation": valuation,
        "epistemic": epistemic,
        "actions": actions,
    }
    return validate_model(doc)


def random_group(rng: random.Random, n_agents: int) -> frozenset:
    return frozenset(i for i in range(n_agents) if rng.random() < 0.5)


def random_formula(rng: random.Random, depth: int, props, n_agents: int) -> Formula:
    if depth <= 0 or rng.random() < 0.2:
        if rng.random() < 0.1:
            return TOP
        return Atom(rng.choice(props))
    op = rng.randrange(5)
    if op == 0:
        return Not(random_formula(rng, depth - 1, props, n_agents))
    if op == 1:
        return And(
            random_formula(rng, depth - 1, props, n_agents),
            random_formula(rng, depth - 1, props, n_agents),
        )
    if op == 2:
        return implies(
            random_formula(rng, depth - 1, props, n_agents),
            random_formula(rng, depth - 1, props, n_agents),
        )
    cls = K if op == 3 else Kh
    return cls(random_group(rng, n_agents), random_formula(rng, depth - 1, props, n_agents))


# ------------------------------------------------------------ soundness sweep


@dataclass
class SweepReport:
    params: dict
    models_tested: int = 0
    instances_tested: int = 0
    skipped: int = 0
    violations: List[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_document(self) -> dict:
        return {
            "params": self.params,
            "models_tested": self.models_tested,
            "instances_tested": self.instances_tested,
            "skipped": self.skipped,
            "violations": sorted(self.violations, key=lambda v: (v["seed"], v["check"])),
        }


_PROP_AXIOMS = (
    lambda a, b, c: implies(a, implies(b, a)),
    lambda a, b, c: implies(implies(a, implies(b, c)), implies(implies(a, b), implies(a, c))),
    lambda a, b, c: implies(implies(Not(b), Not(a)), implies(a, b)),
)


def instantiate_schema(
    name: str, rng: random.Random, props, n_agents: int, depth: int
) -> Formula:
    """A random instance of an axiom schema, side conditions respected."""

    def rf():
        return random_formula(rng, rng.randint(0, depth), props, n_agents)

    if name == "TAUT":
        return rng.choice(_PROP_AXIOMS)(rf(), rf(), rf())
    g = random_group(rng, n_agents)
    h = g | random_group(rng, n_agents)
    return instantiate(name, rf(), rf(), g, h)


def _model_seeds(seed: int, count: int) -> List[int]:
    rng = random.Random(seed)
    return [rng.getrandbits(63) for _ in range(count)]


def soundness_sweep(
    p: GenParams,
    models: int,
    instances_per_model: int = 3,
    evaluate: Evaluator = eval_formula,
) -> SweepReport:
    """Check every axiom schema, the rules, and the empty-group collapse on random models."""
    report = SweepReport(params=asdict(p))
    for model_seed in _model_seeds(p.seed, models):
        rng = random.Random(model_seed)
        m = random_model(replace(p, seed=model_seed))
        props = sorted(m.valuation) or ["p"]
        n = m.agent_count
        full = m.all_states

        def violation(check: str, f: Formula, sat: frozenset) -> None:
            bad = min(full - sat) if full - sat else min(full)
            report.violations.append(
                {
                    "seed": model_seed,
                    "state": m.state_names[bad],
                    "formula": print_formula(f),
                    "check": check,
                }
            )

        try:
            valid_instances = []
            for name in AXIOMS:
                for _ in range(instances_per_model):
                    depth = rng.randint(*p.formula_depth)
                    f = instantiate_schema(name, rng, props, n, depth)
                    report.instances_tested += 1
                    if not match_schema(f, name):
                        violation(f"match:{name}", f, frozenset())
                    sat = evaluate(m, f)
                    if sat != full:
                        violation(name, f, sat)
                    else:
                        valid_instances.append(f)

            for phi in valid_instances[:instances_per_model]:
                psi = random_formula(rng, rng.randint(*p.formula_depth), props, n)
                imp = implies(phi, psi)
                report.instances_tested += 2
                if evaluate(m, imp) == full and evaluate(m, psi) != full:
                    violation("MP", psi, evaluate(m, psi))
                neck = K(random_group(rng, n), phi)
                sat = evaluate(m, neck)
                if sat != full:
                    violation("NECK", neck, sat)

            for _ in range(instances_per_model):
                f = random_formula(rng, rng.randint(*p.formula_depth), props, n)
                report.instances_tested += 1
                expected = full if evaluate(m, f) == full else frozenset()
                for g in (K(frozenset(), f), Kh(frozenset(), f)):
                    sat = evaluate(m, g)
                    if sat != expected:
                        violation("empty-group", g, sat)
        except EnumerationCapExceeded:
            report.skipped += 1
            continue
        report.models_tested += 1
    return report


# -------------------------------------------------------- countermodel search

NAMED_TEMPLATES = {
    "coop": "Kh{0}(p -> q) -> (Kh{1}p -> Kh{0,1}q)",
    "khand": "Kh{0}p & Kh{0}q -> Kh{0}(p & q)",
}


@dataclass
class Countermodel:
    seed: int
    sample: int
    model: Model
    state: int
    formula: Formula

    def to_document(self) -> dict:
        return {
            "seed": self.seed,
            "sample": self.sample,
            "state": self.model.state_names[self.state],
            "formula": print_formula(self.formula),
            "model": model_to_document(self.model),
        }


Template = Union[str, Callable[[random.Random, Model], Formula]]


def template_instantiator(template: Template) -> Tuple[Callable, int]:
    """Return (instantiate(rng, model), minimum agent count)."""
    if callable(template):
        return template, 1
    if template in AXIOMS or template in ("4", "5"):
        name = template

        def inst(rng, m):
            return instantiate_schema(name, rng, sorted(m.valuation) or ["p"], m.agent_count, 2)

        return inst, 1
    shape = parse_formula(NAMED_TEMPLATES.get(template, template))
    letters = sorted(atoms_of(shape))

    def inst(rng, m):
        props = sorted(m.valuation) or ["p"]
        mapping = {
            q: random_formula(rng, rng.randint(0, 1), props, m.agent_count) for q in letters
        }
        return substitute(shape, mapping)

    agents = agents_of(shape)
    return inst, (max(agents) + 1 if agents else 1)


def find_countermodel(
    template: Template, p: GenParams, budget: int, evaluate: Evaluator = eval_formula
) -> Optional[Countermodel]:
    """Search random models for a state falsifying an instance of ``template``.

    Letters in a template are metavariables. ``None`` means the budget ran
    out, not that the template is valid.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    inst, min_agents = template_instantiator(template)
    lo, hi = p.agent_count
    p = replace(p, agent_count=(max(lo, min_agents), max(hi, min_agents)))
    for sample, model_seed in enumerate(_model_seeds(p.seed, budget)):
        found = _try_sample(inst, replace(p, seed=model_seed), evaluate)
        if found is None:
            continue
        m, s, f = found
        # replay from the seed alone before reporting
        again = _try_sample(inst, replace(p, seed=model_seed), eval_formula)
        if again is None or again[1] != s or again[2] != f:
            raise AssertionError(f"countermodel for seed {model_seed} did not replay")
        return Countermodel(model_seed, sample, m, s, f)
    return None


def _try_sample(inst, p: GenParams, evaluate: Evaluator):
    rng = random.Random(p.seed ^ 0x5EED)
    m = random_model(p)
    f = inst(rng, m)
    try:
        sat = evaluate(m, f)
    except EnumerationCapExceeded:
        return None
    outside = m.all_states - sat
    if not outside:
        return None
    return m, min(outside), f
