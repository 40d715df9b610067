import sys

import pytest

from cosetra.algebra import CosetRelationAlgebra
from cosetra.nonrep import build_pentagon, refute


@pytest.fixture(scope="session")
def pentagon():
    return build_pentagon()


@pytest.fixture(scope="session")
def pentagon_alg(pentagon):
    return CosetRelationAlgebra(pentagon)


@pytest.fixture(scope="session")
def pentagon_refutation(pentagon_alg):
    return refute(pentagon_alg)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.lines():
        terminalreporter.write_line(line)
