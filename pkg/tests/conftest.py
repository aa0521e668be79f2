import pytest

# CheckResult objects collected by the acceptance tests
ACCEPTANCE_RESULTS = []


@pytest.fixture
def record_checks():
    def record(results):
        ACCEPTANCE_RESULTS.extend(results)
        return results
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    by_criterion = {}
    for r in ACCEPTANCE_RESULTS:
        by_criterion.setdefault(r.criterion, []).append(r)
    for number in sorted(by_criterion):
        checks = by_criterion[number]
        status = "PASS" if all(r.passed for r in checks) else "FAIL"
        label = "Ramsey regime" if number == 0 else f"criterion {number}"
        failed = [r.name for r in checks if not r.passed]
        suffix = f" (failing: {'; '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"{status} {label}{suffix}")
    for r in ACCEPTANCE_RESULTS:
        terminalreporter.write_line("    " + r.line())
