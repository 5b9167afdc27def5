import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dkh.syntax import (
    BOT,
    TOP,
    And,
    Atom,
    FormulaSyntaxError,
    K,
    Kh,
    Not,
    parse_formula,
    parse_group,
    print_formula,
    subformulas,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")


@pytest.mark.parametrize(
    "text, expected",
    [
        ("Kh{0,1}(~p & ~q)", Kh(frozenset({0, 1}), And(Not(p), Not(q)))),
        ("K{} top", K(frozenset(), TOP)),
        ("p -> q", Not(And(p, Not(q)))),
        ("bot", Not(TOP)),
        ("p | q", Not(And(Not(p), Not(q)))),
        ("p -> q -> r", Not(And(p, Not(Not(And(q, Not(r))))))),
        ("K{0}~p", K(frozenset({0}), Not(p))),
        ("Kp", Atom("Kp")),
        ("  Kh { 2 , 0 }  p_1 ", Kh(frozenset({0, 2}), Atom("p_1"))),
    ],
)
def test_parse(text, expected):
    assert parse_formula(text) == expected


@pytest.mark.parametrize(
    "f, text",
    [
        (Kh(frozenset({0, 1}), And(Not(p), Not(q))), "Kh{0,1}(~p & ~q)"),
        (K(frozenset(), TOP), "K{} top"),
        (Not(TOP), "~top"),
        (And(p, And(q, r)), "p & (q & r)"),
        (And(And(p, q), r), "p & q & r"),
        (Not(And(p, q)), "~(p & q)"),
    ],
)
def test_print(f, text):
    assert print_formula(f) == text


def test_precedence():
    assert parse_formula("~p & q -> r") == parse_formula("((~p) & q) -> r")
    assert parse_formula("p & q | r") == parse_formula("(p & q) | r")
    assert parse_formula("K{0}p & q") == And(K(frozenset({0}), p), q)


def test_group_canonical():
    assert parse_formula("K{1,0}p") == parse_formula("K{0,1}p")


@pytest.mark.parametrize(
    "text", ["K{0,0}p", "K{a}p", "K{-1}p", "p &", "(p", "p q", "top(", "K p", "p $ q", "Kh"]
)
def test_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse_formula(text)


def test_error_position():
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula("p & & q")
    assert info.value.pos == 4


def test_parse_group():
    assert parse_group("") == frozenset()
    assert parse_group("1,0") == frozenset({0, 1})
    with pytest.raises(ValueError):
        parse_group("0,0")


def test_subformulas():
    assert subformulas(And(p, p)) == [p, And(p, p)]
    assert subformulas(TOP) == [TOP]
    assert subformulas(K(frozenset({0}), Not(p))) == [p, Not(p), K(frozenset({0}), Not(p))]


def _formulas():
    groups = st.frozensets(st.integers(0, 3), max_size=3)
    leaves = st.one_of(st.just(TOP), st.sampled_from("pqrs").map(Atom))
    return st.recursive(
        leaves,
        lambda sub: st.one_of(
            sub.map(Not),
            st.builds(And, sub, sub),
            st.builds(K, groups, sub),
            st.builds(Kh, groups, sub),
        ),
        max_leaves=12,
    )


@settings(max_examples=300)
@given(_formulas())
def test_round_trip(f):
    assert parse_formula(print_formula(f)) == f


def test_bot_prints_core():
    assert print_formula(parse_formula("bot")) == "~top"
    assert parse_formula(print_formula(BOT)) == BOT
