import pytest

_REPORT = []


class CriterionLog:
    """Collects named checks for one acceptance criterion."""

    def __init__(self, number, title):
        self.number = number
        self.title = title
        self.checks = []

    def check(self, label, ok, detail=""):
        self.checks.append((label, bool(ok), detail))
        return bool(ok)

    @property
    def passed(self):
        return bool(self.checks) and all(ok for _, ok, _ in self.checks)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        failed = [f"{label} ({detail})" for label, ok, detail in self.checks if not ok]
        extra = f" :: failed {'; '.join(failed)}" if failed else ""
        return f"[{status}] criterion {self.number:2d}: {self.title}{extra}"

    def finish(self):
        _REPORT.append(self)
        bad = [f"{label}: {detail}" for label, ok, detail in self.checks if not ok]
        assert not bad, "; ".join(bad)


@pytest.fixture
def criterion():
    def make(number, title):
        return CriterionLog(number, title)
    return make


def pytest_terminal_summary(terminalreporter):
    if not _REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for log in sorted(_REPORT, key=lambda c: c.number):
        terminalreporter.write_line(log.line())
