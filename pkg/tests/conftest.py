import pytest

from goalrel.ingest import MESSI_SPEC, RONALDO_SPEC, generate_fixture, write_csv

# filled by test_acceptance, printed once at the end of the run
ACCEPTANCE_LINES: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: (len(k.rstrip("ab")), k)):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture(scope="session")
def ronaldo():
    return generate_fixture(RONALDO_SPEC)


@pytest.fixture(scope="session")
def messi():
    return generate_fixture(MESSI_SPEC)


@pytest.fixture(scope="session")
def fixture_files(tmp_path_factory, ronaldo, messi):
    d = tmp_path_factory.mktemp("data")
    a, b = d / "ronaldo.csv", d / "messi.csv"
    write_csv(ronaldo, a)
    write_csv(messi, b)
    return a, b
