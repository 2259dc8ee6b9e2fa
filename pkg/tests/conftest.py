import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# label -> (passed, detail); filled by acceptance tests
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def report(request):
    """Record an acceptance check. Tests that die before reporting are logged as FAIL."""
    seen = []

    def record(label: str, ok: bool, detail: str = "") -> bool:
        ACCEPTANCE[label] = (ok, detail)
        seen.append(label)
        return ok

    yield record
    rep = getattr(request.node, "rep_call", None)
    if rep is not None and rep.failed and not seen:
        msg = rep.longrepr.reprcrash.message if hasattr(rep.longrepr, "reprcrash") else ""
        ACCEPTANCE[request.node.name] = (False, msg.splitlines()[0] if msg else "")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, "rep_" + rep.when, rep)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[label]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")
