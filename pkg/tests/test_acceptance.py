"""Exit criteria. Each test records one PASS/FAIL line, shown in the summary."""
import json
import random
import time
from dataclasses import replace

import pytest

from conftest import ACCEPTANCE_LINES, DATA, GOLDEN
from dkh.cli import run
from dkh.harness import (
    GenParams,
    find_countermodel,
    random_formula,
    random_group,
    random_model,
    soundness_sweep,
)
from dkh.model import class_of, validate_model
from dkh.proof import AXIOMS, MONOKH_DERIVATION, check_text
from dkh.semantics import (
    OracleGuardExceeded,
    eval_formula,
    kh_bruteforce,
    kh_winning,
    synthesize_strategy,
    verify_strategy,
)
from dkh.syntax import K, Kh, parse_formula, print_formula
from test_proof import _mutations


def record(number, title, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    ACCEPTANCE_LINES.append(f"[{status}] {number}. {title}" + (f" ({detail})" if detail else ""))
    print(ACCEPTANCE_LINES[-1])
    assert ok, f"criterion {number} failed: {detail}"


def test_1_example4_closure(capsys):
    start = time.perf_counter()
    model = str(DATA / "ex4.json")
    run(["closure", "-m", model, "-g", "0,1"])
    canonical = capsys.readouterr().out.split()
    run(["closure", "-m", model, "-g", "0,1", "--nested"])
    nested = capsys.readouterr().out.split()
    elapsed = time.perf_counter() - start
    ok = (
        sorted(canonical) == sorted(["{d}", "{a}", "{b}", "{c}", "{a,c}", "{b,c}"])
        and sorted(nested) == sorted(["d", "a", "b", "c", "<a,c>", "<b,c>"])
        and elapsed < 1.0
    )
    record(1, "closure of ex4 model", ok, f"{len(canonical)} canonical, {len(nested)} nested, {elapsed:.3f}s")


def test_2_example5(ex5):
    start = time.perf_counter()
    s = ex5.state_index("s_pq")
    g = frozenset({0, 1})
    goal = parse_formula("~p & ~q")
    checks = [
        s in eval_formula(ex5, parse_formula("Kh{0,1}(~p & ~q)")),
        s not in eval_formula(ex5, parse_formula("Kh{0}~p")),
        s not in eval_formula(ex5, parse_formula("Kh{1}~q")),
    ]
    sigma = synthesize_strategy(ex5, s, g, goal)
    checks.append(sigma.assignment == {frozenset({s}): frozenset({"a", "b"})})
    v = verify_strategy(ex5, g, sigma, s, eval_formula(ex5, goal))
    checks.append(v.terminating and v.leaves == {frozenset({ex5.state_index("t3_np_nq")})})
    elapsed = time.perf_counter() - start
    record(2, "ex5 golden checks", all(checks) and elapsed < 1.0, f"{checks}, {elapsed:.3f}s")


def test_3_example3(ex3):
    s = ex3.state_index("s_pq")
    goal = parse_formula("~p & ~q")
    sigma = synthesize_strategy(ex3, s, {0, 1}, goal)
    checks = [
        s in eval_formula(ex3, Kh(frozenset({0, 1}), goal)),
        sigma is not None and sigma.assignment == {frozenset({s}): frozenset({"a", "b"})},
        s not in eval_formula(ex3, Kh(frozenset({0}), goal)),
        s not in eval_formula(ex3, Kh(frozenset({1}), goal)),
    ]
    record(3, "ex3 golden checks", all(checks), str(checks))


def test_4_empty_group_collapse():
    rng = random.Random(4)
    violations = 0
    for seed in range(200):
        m = random_model(GenParams(seed=seed, atoms_per_group=(1, 2), transition_density=0.4))
        phi = random_formula(rng, rng.randint(0, 3), sorted(m.valuation), m.agent_count)
        expected = m.all_states if eval_formula(m, phi) == m.all_states else frozenset()
        e = frozenset()
        if not eval_formula(m, K(e, phi)) == eval_formula(m, Kh(e, phi)) == expected:
            violations += 1
    record(4, "K{}f = Kh{}f = universal truth of f on 200 models", violations == 0, f"{violations} violations")


def test_5_soundness_sweep():
    start = time.perf_counter()
    report = soundness_sweep(GenParams(seed=2024), models=500, instances_per_model=3)
    elapsed = time.perf_counter() - start
    ok = (
        report.passed
        and report.models_tested == 500
        and report.instances_tested >= 500 * len(AXIOMS) * 3
        and elapsed <= 60.0
    )
    record(
        5,
        "soundness sweep, 500 models x 14 schemas x 3 + MP/NECK",
        ok,
        f"{report.instances_tested} instances, {len(report.violations)} violations, "
        f"{report.skipped} skipped, {elapsed:.1f}s",
    )


def test_6_fixpoint_matches_oracle():
    rng = random.Random(6)
    p = GenParams(state_count=(2, 5), atoms_per_group=(1, 2), transition_density=0.4)
    checked = disagreements = positives = multistep = 0
    while checked < 300:
        m = random_model(replace(p, seed=rng.getrandbits(63)))
        g = random_group(rng, m.agent_count)
        phi = random_formula(rng, rng.randint(0, 2), sorted(m.valuation), m.agent_count)
        s = rng.randrange(len(m.state_names))
        try:
            expected = kh_bruteforce(m, s, g, phi)
        except OracleGuardExceeded:
            continue
        w = kh_winning(m, g, eval_formula(m, phi))
        got = class_of(m, g, s) in w.winning
        checked += 1
        disagreements += got != expected
        positives += got
        multistep += w.rank.get(class_of(m, g, s), 0) >= 2
    record(
        6,
        "fixpoint agrees with strategy enumeration on 300 instances",
        disagreements == 0,
        f"{disagreements} disagreements, {positives} true, {multistep} needing >= 2 steps",
    )


@pytest.mark.parametrize("name", ["coop", "khand"])
def test_7_invalid_schemas(name):
    found = find_countermodel(name, GenParams(seed=0), 10_000)
    golden = json.loads((GOLDEN / f"{name}.json").read_text())
    m = validate_model(golden["model"])
    frozen_ok = m.state_index(golden["state"]) not in eval_formula(m, parse_formula(golden["formula"]))
    ok = found is not None and found.to_document() == golden and frozen_ok
    detail = f"seed 0, hit at sample {found.sample}" if found else "none within 10000"
    record(f"7/{name}", f"countermodel for {name}", ok, detail)


def test_8_monokh_and_mutations():
    base_ok = all(v.ok for v in check_text(MONOKH_DERIVATION))
    lines = [l for l in MONOKH_DERIVATION.splitlines() if l.strip()]
    total = survived = 0
    for i, line in enumerate(lines):
        for mutant in _mutations(line):
            verdicts = check_text("\n".join(lines[:i] + [mutant] + lines[i + 1 :]))
            total += 1
            survived += verdicts[i].ok
    record(8, "MONOKh derivation passes, every mutation fails", base_ok and survived == 0 and total > 0,
           f"{total} mutants, {survived} survived")


def test_9_round_trip():
    rng = random.Random(9)
    failures = 0
    for _ in range(1000):
        f = random_formula(rng, rng.randint(0, 6), list("pqrs"), 4)
        if parse_formula(print_formula(f)) != f:
            failures += 1
    record(9, "parse(print(f)) == f on 1000 random formulas", failures == 0, f"{failures} failures")
