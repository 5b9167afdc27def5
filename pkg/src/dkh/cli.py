"""Command-line front end.

Exit codes: 0 success/true, 1 false/failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .actions import (
    EnumerationCapExceeded,
    canonical_actions,
    closure_nested,
    flatten,
    format_joint,
    joint_key,
)
from .harness import GenParams, NAMED_TEMPLATES, find_countermodel, soundness_sweep
from .model import ModelError, format_class, load_model
from .proof import DerivationError, check_text
from .semantics import (
    StrategyError,
    eval_formula,
    strategy_from_document,
    strategy_to_document,
    synthesize_strategy,
    verify_strategy,
)
from .syntax import FormulaSyntaxError, parse_formula, parse_group


class UsageError(Exception):
    pass


def _state(m, name: str) -> int:
    return m.state_index(name)


def cmd_check(args) -> int:
    m = load_model(args.model)
    f = parse_formula(args.formula)
    sat = eval_formula(m, f)
    if args.state is not None:
        value = _state(m, args.state) in sat
        print("true" if value else "false")
        return 0 if value else 1
    for s in m.states:
        print(f"{m.state_names[s]}: {'true' if s in sat else 'false'}")
    return 0 if sat == m.all_states else 1


def cmd_closure(args) -> int:
    m = load_model(args.model)
    g = parse_group(args.group)
    m.check_group(g)
    if args.nested:
        for d in sorted(closure_nested(m, g), key=lambda d: (joint_key(flatten(d)), str(d))):
            print(d)
    else:
        for j in canonical_actions(m, g):
            print(format_joint(j))
    return 0


def cmd_synth(args) -> int:
    m = load_model(args.model)
    g = parse_group(args.group)
    sigma = synthesize_strategy(m, _state(m, args.state), g, parse_formula(args.formula))
    if sigma is None:
        print("no strategy")
        return 1
    text = json.dumps(strategy_to_document(m, sigma), indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def cmd_verify(args) -> int:
    m = load_model(args.model)
    g = parse_group(args.group)
    with open(args.strategy) as fh:
        sigma = strategy_from_document(m, json.load(fh))
    if sigma.group != g:
        raise StrategyError(f"strategy file is for group {sorted(sigma.group)}, not {sorted(g)}")
    goal = eval_formula(m, parse_formula(args.formula))
    v = verify_strategy(m, g, sigma, _state(m, args.state), goal)

    def classes(xs):
        return "[" + ", ".join(format_class(m, x) for x in sorted(xs, key=min)) + "]"

    print(f"terminating: {str(v.terminating).lower()}")
    print(f"leaves: {classes(v.leaves)}")
    print(f"inners: {classes(v.inners)}")
    print(f"bad_leaf: {format_class(m, v.bad_leaf) if v.bad_leaf else 'none'}")
    cycle = " -> ".join(format_class(m, x) for x in v.cycle_witness) if v.cycle_witness else "none"
    print(f"cycle_witness: {cycle}")
    print(f"success: {str(v.success).lower()}")
    return 0 if v.success else 1


def cmd_prove(args) -> int:
    with open(args.file) as fh:
        verdicts = check_text(fh.read())
    for v in verdicts:
        print(f"{v.index}: OK" if v.ok else f"{v.index}: FAIL ({v.reason})")
    return 0 if all(v.ok for v in verdicts) else 1


def cmd_fuzz(args) -> int:
    report = soundness_sweep(GenParams(seed=args.seed), args.models, args.instances)
    print(json.dumps(report.to_document(), indent=2))
    return 0 if report.passed else 1


def cmd_counter(args) -> int:
    found = find_countermodel(args.schema, GenParams(seed=args.seed), args.budget)
    if found is None:
        print(f"no countermodel within {args.budget} samples")
        return 1
    print(json.dumps(found.to_document(), indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dkh", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluate a formula on a model")
    p.add_argument("-m", "--model", required=True)
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("-s", "--state")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("closure", help="list the distributed actions of a group")
    p.add_argument("-m", "--model", required=True)
    p.add_argument("-g", "--group", required=True, help="comma list, '' for the empty group")
    p.add_argument("--nested", action="store_true", help="print nested tuple terms")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("synth", help="synthesize a know-how strategy")
    p.add_argument("-m", "--model", required=True)
    p.add_argument("-s", "--state", required=True)
    p.add_argument("-g", "--group", required=True)
    p.add_argument("-f", "--formula", required=True, help="goal formula")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify", help="verify a strategy file")
    p.add_argument("-m", "--model", required=True)
    p.add_argument("-g", "--group", required=True)
    p.add_argument("--strategy", required=True)
    p.add_argument("-s", "--state", required=True)
    p.add_argument("-f", "--formula", required=True, help="goal formula")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("prove", help="check a derivation file")
    p.add_argument("file")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("fuzz", help="run the soundness sweep")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--models", type=int, default=100)
    p.add_argument("--instances", type=int, default=3)
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("counter", help="search for a countermodel")
    p.add_argument(
        "--schema",
        required=True,
        help=f"axiom name, one of {sorted(NAMED_TEMPLATES)}, or a formula template",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=10_000)
    p.set_defaults(func=cmd_counter)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if getattr(args, "models", 1) < 1 or getattr(args, "budget", 1) < 1:
            raise UsageError("--models and --budget must be positive")
        return args.func(args)
    except (
        OSError,
        json.JSONDecodeError,
        ModelError,
        FormulaSyntaxError,
        DerivationError,
        StrategyError,
        EnumerationCapExceeded,
        UsageError,
        ValueError,
    ) as exc:
        print(f"dkh: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
