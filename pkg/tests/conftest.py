import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

FIXTURES = HERE / "fixtures"


def fixture_paths(name):
    d = FIXTURES / name
    return {"pubs": d / "publications.csv", "projects": d / "projects.csv", "orgs": d / "org_aliases.csv"}


@pytest.fixture
def metrics_fixture():
    return fixture_paths("metrics")


@pytest.fixture
def case_study_fixture():
    return fixture_paths("case_study")


@pytest.fixture
def write_csv(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return write


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(acceptance.RESULTS, key=lambda s: int(s.split("[")[1].split("]")[0])):
        terminalreporter.write_line(line)
