from pathlib import Path

import pytest

from icpsk.codes import parse_code
from icpsk.problem import load_problem

DATA = Path(__file__).resolve().parent.parent / "data"

EX1_CODE = "x1+x4+x5, x1+x2+x3+x4+x5, x4+x5"
EX2_CODE = "x1+x4, x2+x3, x5, x6"
EX3_CODE = "x1+x2, x3, x4, x5"


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def ex1():
    return load_problem(DATA / "example1.json")


@pytest.fixture(scope="session")
def ex2():
    return load_problem(DATA / "example2.json")


@pytest.fixture(scope="session")
def ex3():
    return load_problem(DATA / "example3.json")


@pytest.fixture(scope="session")
def code1():
    return parse_code(EX1_CODE, 5)


@pytest.fixture(scope="session")
def code2():
    return parse_code(EX2_CODE, 6)


@pytest.fixture(scope="session")
def code3():
    return parse_code(EX3_CODE, 5)


def pytest_configure(config):
    config.acceptance_lines = {}


def pytest_terminal_summary(terminalreporter, config):
    lines = config.acceptance_lines
    if lines:
        terminalreporter.section("acceptance criteria")
        for key in sorted(lines):
            terminalreporter.write_line(lines[key])
