import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

# seed-pinned, reproducible property runs
settings.register_profile(
    "pinned",
    derandomize=True,
    deadline=None,
    max_examples=200,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("pinned")

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT / "src") not in sys.path:
    sys.path.insert(0, str(ROOT / "src"))

import pytest

# one pass/fail line per acceptance criterion, printed after the run
_CRITERIA: dict[str, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(key, title): acceptance criterion covered by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    key, title = mark.args
    entry = _CRITERIA.setdefault(key, [title, True, []])
    if rep.failed:
        entry[1] = False
        entry[2].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA, key=lambda k: int(k[2:])):
        title, ok, failed = _CRITERIA[key]
        extra = f" (failing: {', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"{key} {'PASS' if ok else 'FAIL'}: {title}{extra}")
