import pytest

CRITERIA: dict = {}


def record(number: int, ok: bool, detail: str) -> None:
    """Remember one acceptance verdict; printed in the terminal summary."""
    CRITERIA[number] = (ok, detail)


@pytest.hookimpl(trylast=True)
def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, detail = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
