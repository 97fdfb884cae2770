"""Collects acceptance-criterion outcomes and prints one line per criterion
at the end of the run."""

CRITERIA_RESULTS = []


def record_criterion(name: str, ok: bool) -> None:
    CRITERIA_RESULTS.append((name, ok))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not CRITERIA_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in CRITERIA_RESULTS:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}")
