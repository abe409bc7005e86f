from __future__ import annotations

import os
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"
ECLIPSE_ENV = "PROGSIZE_ECLIPSE_DIR"
ECLIPSE_VERSIONS = ("2.0", "2.1", "3.0")

_ORDER = {"passed": 0, "skipped": 1, "failed": 2}
_outcomes: dict[str, dict] = {}


def eclipse_dir() -> Path | None:
    value = os.environ.get(ECLIPSE_ENV)
    if not value:
        return None
    path = Path(value)
    return path if path.is_dir() else None


@pytest.fixture(scope="session")
def eclipse_datasets():
    """Eclipse 2.0 / 2.1 / 3.0 records, loaded once; skips when the archive is absent."""
    from progsize.ingest import import_eclipse_dataset

    root = eclipse_dir()
    if root is None:
        pytest.skip(f"Eclipse dataset not available: set {ECLIPSE_ENV} to a directory with files-<version>.csv")
    return {v: import_eclipse_dataset(root, v) for v in ECLIPSE_VERSIONS}


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("acceptance")
        if marker is not None:
            ident, title = marker.args
            item.user_properties.append(("acceptance", (ident, title)))


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "acceptance" not in props:
        return
    ident, title = props["acceptance"]
    if report.when == "call" or (report.when == "setup" and not report.passed):
        outcome = "failed" if report.failed else report.outcome
        reason = ""
        if report.skipped and isinstance(report.longrepr, tuple):
            reason = report.longrepr[2]
        entry = _outcomes.setdefault(ident, {"title": title, "outcome": "passed", "reason": ""})
        if _ORDER[outcome] >= _ORDER[entry["outcome"]]:
            entry["outcome"] = outcome
            entry["reason"] = reason or entry["reason"]


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    label = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}
    for ident in sorted(_outcomes, key=lambda s: int(s.lstrip("AC"))):
        e = _outcomes[ident]
        line = f"{ident:<5} {label[e['outcome']]:<4}  {e['title']}"
        if e["outcome"] == "skipped" and e["reason"]:
            line += f"  [{e['reason'].removeprefix('Skipped: ')}]"
        tr.write_line(line)
