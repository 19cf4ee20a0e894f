import pytest

from qutritbell.acceptance import run_all


@pytest.fixture(scope="session")
def acceptance_results():
    return {r.number: r for r in run_all()}


def pytest_terminal_summary(terminalreporter):
    results = getattr(terminalreporter.config, "_acceptance_results", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        r = results[number]
        terminalreporter.write_line(f"ACCEPTANCE criterion {number}: {'PASS' if r.passed else 'FAIL'}  {r.title}")
