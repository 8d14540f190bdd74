import sys

import pytest

from gencontact.cli import catalog, parse
from gencontact.cli.main import run


@pytest.fixture(scope="session")
def catalog_structures():
    """{name: Structure} for every bundled example."""
    return {e["name"]: parse(catalog.read(e["name"])) for e in catalog.entries()}


@pytest.fixture(scope="session")
def catalog_outcomes(catalog_structures):
    """{name: [Outcome]} from running every applicable check once."""
    return {name: run(s, []) for name, s in catalog_structures.items()}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.write_sep("=", "acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
