import pytest

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_ACCEPTANCE.items(), key=lambda kv: _order(kv[0])):
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")


def _order(name):
    parts = name.split("_")
    try:
        return (int(parts[2]), name)
    except (IndexError, ValueError):
        return (99, name)


@pytest.fixture(scope="session")
def novel_text():
    from textgen import synthetic_novel

    return synthetic_novel()


@pytest.fixture(scope="session")
def prose_text():
    from textgen import english_prose

    return english_prose()
