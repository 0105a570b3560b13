import pytest


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture
def record(request):
    """Run ``check()`` and log a one-line PASS/FAIL entry for the summary."""

    def run(label, check):
        try:
            detail = check()
        except Exception as exc:
            request.config._acceptance_lines.append(f"FAIL  {label}: {type(exc).__name__}: {exc}")
            raise
        request.config._acceptance_lines.append(f"PASS  {label}" + (f": {detail}" if detail else ""))
        return detail

    return run


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
