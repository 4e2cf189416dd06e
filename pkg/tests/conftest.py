import pytest

_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record one pass/fail line per acceptance criterion.

    Usage: ``criterion(n, detail)`` at the end of a test marks it passed; a test
    that fails before calling it is reported as failed with the assertion text.
    """
    state = {}

    def mark(n: int, detail: str = "") -> None:
        state["n"] = n
        state["detail"] = detail

    yield mark
    n = state.get("n") or request.node.get_closest_marker("criterion").args[0]
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed and "detail" in state
    detail = state.get("detail", "") if ok else (str(rep.longrepr).splitlines()[-1] if rep is not None and rep.failed else "not reached")
    _ACCEPTANCE[n] = (ok, detail)
    print(f"\nACCEPTANCE {n:2d} {'PASS' if ok else 'FAIL'} {detail}")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
