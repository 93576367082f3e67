from pathlib import Path

import pytest

from resume_rater.corpus import default_stopwords
from resume_rater.entities import Gazetteers

FIXTURES = Path(__file__).parent / "fixtures"
RESUMES = FIXTURES / "resumes"


@pytest.fixture(scope="session")
def gazetteers():
    return Gazetteers.default()


@pytest.fixture(scope="session")
def stopwords():
    return default_stopwords()


@pytest.fixture
def fig3_text():
    return (RESUMES / "john_doe.txt").read_text(encoding="utf-8")


_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        prev = _criteria.get(number, (title, "PASS"))[1]
        status = "PASS" if report.outcome == "passed" and prev == "PASS" else "FAIL"
        _criteria[number] = (title, status)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, status = _criteria[number]
        terminalreporter.write_line(f"[{status}] {number:>2}. {title}")
