"""Shared pytest plumbing: collects the acceptance criterion verdict lines
and prints them as a terminal summary section, outside output capture."""

_criterion_lines = []


def record_criterion_line(line):
    _criterion_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in _criterion_lines:
            terminalreporter.write_line(line)
