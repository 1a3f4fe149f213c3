import json
import sys
from importlib import resources

import pytest

from qcc.quiver import Quiver


def bundled(name: str) -> Quiver:
    text = resources.files("qcc").joinpath("quivers", f"{name}.json").read_text()
    return Quiver.from_dict(json.loads(text), name)


@pytest.fixture(scope="session")
def a2():
    return bundled("a2")


@pytest.fixture(scope="session")
def a3():
    return bundled("a3")


@pytest.fixture(scope="session")
def d4():
    return bundled("d4")


@pytest.fixture(scope="session")
def d5():
    return bundled("d5")


@pytest.fixture(scope="session")
def e6():
    return bundled("e6")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
