"""Shared pytest hooks.

The acceptance suite records one verdict line per criterion; echo them in the
terminal summary so they are visible even when pytest captures stdout.
"""

ACCEPTANCE_VERDICTS = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_VERDICTS:
            terminalreporter.write_line(line)
