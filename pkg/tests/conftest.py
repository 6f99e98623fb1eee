"""Shared test fixtures: the acceptance-criteria verdict reporter."""

import pytest

_VERDICTS = []


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(name): named end-to-end acceptance criterion")


@pytest.fixture
def criterion(request):
    """One-shot reporter for acceptance tests.

    The returned callable prints a single PASS/FAIL line for the criterion
    named in the test's marker, stores it for the end-of-run summary, and
    then asserts, so a red criterion still leaves its verdict on record.
    """
    marker = request.node.get_closest_marker("criterion")
    name = marker.args[0] if marker else request.node.name

    def record(ok: bool, detail: str = ""):
        line = f"[{name}] {'PASS' if ok else 'FAIL'}"
        if detail:
            line += f": {detail}"
        print(line)
        _VERDICTS.append(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
