"""Shared pytest hooks.

The acceptance tests record one PASS/FAIL line per criterion; replaying
them in the terminal summary keeps them visible even when output capture
swallows the in-test prints.
"""

ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)
