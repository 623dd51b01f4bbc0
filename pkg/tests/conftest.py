"""Collects acceptance-criterion outcomes and prints one PASS/FAIL line each."""

import pytest

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            num, title = mark.args
            _CRITERIA.setdefault(num, {"title": title, "outcomes": []})
            item.user_properties.append(("criterion", num))


def pytest_runtest_logreport(report):
    num = dict(report.user_properties).get("criterion")
    if num is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _CRITERIA[num]["outcomes"].append((report.outcome, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        info = _CRITERIA[num]
        outcomes = info["outcomes"]
        if not outcomes:
            status = "NOT RUN"
        elif all(o == "passed" for o, _ in outcomes):
            status = "PASS"
        else:
            status = "FAIL"
        secs = sum(d for _, d in outcomes)
        terminalreporter.write_line(f"criterion {num:2d}: {status:7s} {info['title']} ({secs:.1f}s)")


@pytest.fixture
def criterion_note(request):
    """Attach a short measurement to the test report (shown with -rA)."""

    def add(text):
        request.node.user_properties.append(("note", text))
        print(text)

    return add
