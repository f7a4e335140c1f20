import pytest

ACCEPTANCE_LINES: dict[str, list[tuple[str, bool]]] = {}


@pytest.fixture
def acceptance():
    """Record one labelled outcome; the terminal summary prints them in order."""
    def record(criterion: str, detail: str, ok: bool):
        ACCEPTANCE_LINES.setdefault(criterion, []).append((detail, ok))
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE_LINES, key=lambda c: int(c.split()[0])):
        rows = ACCEPTANCE_LINES[crit]
        verdict = "PASS" if all(ok for _, ok in rows) else "FAIL"
        terminalreporter.write_line(f"criterion {crit}: {verdict}")
        for detail, ok in rows:
            terminalreporter.write_line(f"    {'ok  ' if ok else 'FAIL'} {detail}")
