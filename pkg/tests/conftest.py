"""Collects the acceptance outcomes and prints one line per criterion at the end of the run."""

import re

_OUTCOMES: dict[int, tuple[str, str]] = {}


def pytest_runtest_makereport(item, call):
    m = re.match(r"test_criterion_(\d+)", item.name)
    if not m or call.when != "call":
        return
    n = int(m.group(1))
    doc = (item.function.__doc__ or "").strip().splitlines()
    title = doc[0] if doc else item.name
    _OUTCOMES[n] = ("FAIL" if call.excinfo is not None else "PASS", title)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_OUTCOMES):
        status, title = _OUTCOMES[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {title}")
