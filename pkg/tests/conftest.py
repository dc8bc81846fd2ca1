"""Shared test plumbing: the acceptance suite reports one line per criterion,
echoed in a terminal section so the verdicts are visible even when pytest
captures stdout."""

ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, description: str, ok: bool) -> bool:
    line = f"[criterion {number:02d}] {'PASS' if ok else 'FAIL'} — {description}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
