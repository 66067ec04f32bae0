import pytest

from modadequacy.constructions import a4_subgroup_psl2, psl2

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def l2_137():
    return psl2(137)


@pytest.fixture(scope="session")
def l2_137_a4(l2_137):
    return a4_subgroup_psl2(l2_137)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
