import importlib
import re

import numpy as np
import pytest

from su11squeeze import _kernels_py


def _backends():
    out = [pytest.param(_kernels_py, id="python")]
    try:
        out.append(pytest.param(importlib.import_module("su11squeeze._kernels"), id="cython"))
    except ImportError:
        pass
    return out


@pytest.fixture(params=_backends())
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_CRITERION = re.compile(r"test_acceptance\.py::test_(c\d+)([a-z]?)_")
_ACCEPTANCE: dict = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m or (report.when != "call" and report.passed):
        return
    name = m.group(1).upper()
    entry = _ACCEPTANCE.setdefault(name, {"passed": True, "detail": []})
    if report.failed:
        entry["passed"] = False
        crash = getattr(report.longrepr, "reprcrash", None)
        reason = crash.message.splitlines()[0] if crash is not None else "failed"
        entry["detail"].append("%s%s: %s" % (m.group(1), m.group(2), reason))
    elif report.skipped:
        entry["passed"] = False
        entry["detail"].append(m.group(1) + m.group(2) + " skipped")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda s: int(s[1:])):
        entry = _ACCEPTANCE[name]
        line = "%-4s %s" % (name, "PASS" if entry["passed"] else "FAIL")
        if entry["detail"]:
            line += "  (" + ", ".join(entry["detail"]) + ")"
        terminalreporter.write_line(line)
