import pytest

from cdrefactor import generators

_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture
def tc1():
    return generators.tc1()


@pytest.fixture
def tc2():
    return generators.tc2()


@pytest.fixture(scope="session")
def tc3_model():
    return generators.tc3()


@pytest.fixture
def criterion():
    """Record one acceptance criterion's verdict for the terminal summary."""

    class _Recorder:
        def __call__(self, label: str, ok: bool, detail: str = "") -> None:
            _RESULTS.append((label, ok, detail))
            assert ok, f"{label}: {detail}"

    return _Recorder()


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _RESULTS:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {label}  {detail}")
