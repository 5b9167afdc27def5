import json
from pathlib import Path

import pytest

from dkh.model import validate_model

DATA = Path(__file__).resolve().parent.parent / "data"
GOLDEN = Path(__file__).resolve().parent / "golden"


def load_doc(name):
    return json.loads((DATA / name).read_text())


@pytest.fixture
def ex3():
    return validate_model(load_doc("ex3.json"))


@pytest.fixture
def ex4():
    return validate_model(load_doc("ex4.json"))


@pytest.fixture
def ex5():
    return validate_model(load_doc("ex5.json"))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
