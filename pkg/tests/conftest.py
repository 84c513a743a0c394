import pytest

_verdicts = []


class Criterion:
    """Records one acceptance verdict and fails the test when it misses."""

    def __init__(self, number, title):
        self.number = number
        self.title = title

    def check(self, ok, detail):
        line = f"criterion {self.number} {'PASS' if ok else 'FAIL'}: {self.title} ({detail})"
        _verdicts.append((self.number, line))
        print(line)
        assert ok, line


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_verdicts):
        terminalreporter.write_line(line)
