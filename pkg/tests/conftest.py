import pytest

_RESULTS = []


@pytest.fixture
def acceptance():
    """Recorder for the acceptance-criteria summary printed after the run."""

    def record(tag, name, passed, detail=""):
        _RESULTS.append((tag, name, bool(passed), detail))

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for tag, name, passed, detail in sorted(_RESULTS):
        line = f"{tag} {name}: {'PASS' if passed else 'FAIL'}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
