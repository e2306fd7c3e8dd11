import pytest

_criteria: list[tuple[str, str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        number, title = marker.args
        status = "PASS" if rep.passed else "FAIL"
        _criteria.append((number, status, title))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    grouped: dict[str, list] = {}
    for number, status, title in _criteria:
        grouped.setdefault(number, [title, []])[1].append(status)
    terminalreporter.section("acceptance criteria")
    for number in sorted(grouped, key=int):
        title, statuses = grouped[number]
        status = "PASS" if all(s == "PASS" for s in statuses) else "FAIL"
        cases = f" ({statuses.count('PASS')}/{len(statuses)} cases)" if len(statuses) > 1 else ""
        terminalreporter.write_line(f"[{status}] criterion {number}: {title}{cases}")
