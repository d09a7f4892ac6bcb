import pytest

from tables import write_case1_csv


@pytest.fixture
def case1_csv(tmp_path):
    return write_case1_csv(tmp_path / "case1.csv")


_ACCEPTANCE = []


@pytest.fixture
def criterion():
    """``criterion(number, name, ok, detail)``: print and record one acceptance verdict."""

    def record(number, name, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {name}" + (f" ({detail})" if detail else "")
        _ACCEPTANCE.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
