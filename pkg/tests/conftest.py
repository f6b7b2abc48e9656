import os

from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# one PASS/FAIL line per acceptance criterion, printed after the run
_criteria: dict[int, str] = {}
_names: dict[int, list[str]] = {}
_notes: dict[int, list[str]] = {}


def _criterion_of(nodeid: str) -> str | None:
    if "test_acceptance.py::test_criterion_" not in nodeid:
        return None
    return nodeid.split("::test_criterion_")[1].split("[")[0]


def _number(key: str) -> int:
    return int(key.split("_")[0])


def pytest_runtest_logreport(report):
    key = _criterion_of(report.nodeid)
    if key is None:
        return
    n = _number(key)
    _names.setdefault(n, [])
    name = key.split("_", 1)[1]
    if name not in _names[n]:
        _names[n].append(name)
    if report.failed:
        _criteria[n] = "FAIL"
    elif report.when == "call" and report.passed:
        _criteria.setdefault(n, "PASS")
    if report.when == "call":
        _notes.setdefault(n, []).extend(text for name, text in report.sections if name == "Captured stdout call")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        terminalreporter.write_line(f"{_criteria[n]}  criterion {n}: {', '.join(_names[n])}")
        for text in _notes.get(n, []):
            for line in text.splitlines():
                terminalreporter.write_line(f"      {line}")
