from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("repo")

_CRITERIA: dict = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if name.startswith("test_criterion_") and report.when == "call":
        _CRITERIA[int(name.split("_")[2])] = report.outcome
    elif name.startswith("test_criterion_") and report.failed:
        _CRITERIA[int(name.split("_")[2])] = "failed"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        verdict = "PASS" if _CRITERIA[k] == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {k}: {verdict}")
