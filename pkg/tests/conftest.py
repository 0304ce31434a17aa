"""Print one PASS/FAIL line per acceptance criterion at the end of a session."""

import pytest

_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_KEY] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or report.failed:
        cid, text = marker.args
        entry = item.config.stash[_KEY].setdefault(cid, {"text": text, "ok": True, "notes": []})
        entry["ok"] &= report.passed
        if report.failed:
            msg = str(report.longrepr.reprcrash.message) if hasattr(report.longrepr, "reprcrash") else str(report.longrepr)
            entry["notes"].append(msg.splitlines()[0][:200])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash[_KEY]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(results, key=str):
        r = results[cid]
        line = f"criterion {cid}: {'PASS' if r['ok'] else 'FAIL'}  {r['text']}"
        terminalreporter.write_line(line)
        for note in r["notes"]:
            terminalreporter.write_line(f"    {note}")
