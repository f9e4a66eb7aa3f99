"""Per-criterion PASS/FAIL summary for the acceptance suite."""

from collections import defaultdict

_outcomes: dict = defaultdict(list)
_titles: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion covered by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _titles[m.args[0]] = m.args[1]
            _outcomes.setdefault(m.args[0], [])


def pytest_runtest_makereport(item, call):
    m = item.get_closest_marker("criterion")
    if m is None:
        return
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        _outcomes[m.args[0]].append(call.excinfo is None)


def pytest_terminal_summary(terminalreporter):
    if not _titles:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_titles):
        results = _outcomes[n]
        ok = bool(results) and all(results)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {_titles[n]}")
