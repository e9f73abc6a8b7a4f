import pytest

# criterion number -> list of (test name, passed)
_CRITERIA: dict[int, list[tuple[str, bool]]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _CRITERIA.setdefault(marker.args[0], []).append((item.name, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        runs = _CRITERIA[n]
        ok = all(p for _, p in runs)
        failed = [name for name, p in runs if not p]
        tail = f" ({', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}{tail}")
