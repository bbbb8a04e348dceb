from pathlib import Path

import pytest

from jatranslit.corpus import ingest

DATA = Path(__file__).parent / "data"

_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    outcome = "PASS" if call.excinfo is None else "FAIL"
    prev = _criteria.get(number)
    # a criterion split over several tests fails if any part fails
    if prev is None or prev[1] == "PASS":
        _criteria[number] = (title, outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, outcome = _criteria[number]
        terminalreporter.write_line(f"criterion {number}: {outcome}  {title}")


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def mixed_corpus():
    return ingest(DATA / "mixed.ja.txt", DATA / "mixed.ar.txt")


@pytest.fixture
def khazari_corpus():
    return ingest(DATA / "khazari.ja.txt", DATA / "khazari.ar.txt")
