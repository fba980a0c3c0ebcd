import pytest
from hypothesis import settings

from qbrst.qlie import bundled

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

BUNDLED = ["sl2", "gl11", "hecke2", "abelian1"]


@pytest.fixture(scope="session")
def algebras():
    return {name: bundled(name) for name in BUNDLED}


@pytest.fixture(params=BUNDLED)
def algebra(request, algebras):
    return algebras[request.param]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
