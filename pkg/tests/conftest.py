import pytest

from fidl_lab.fidl import BOOL4, CHAIN2, CHAIN3, mod2, modal_bool4, trivial_module
from fidl_lab.frames import pt_frame

# criterion number -> (title, outcome), filled in as acceptance tests report
_ACCEPTANCE = {}


@pytest.fixture
def MOD2():
    return mod2()


@pytest.fixture
def MODAL():
    return modal_bool4()


@pytest.fixture
def TRIVIAL():
    return trivial_module()


@pytest.fixture
def PT():
    return pt_frame()


@pytest.fixture
def lattices():
    return {"CHAIN2": CHAIN2, "CHAIN3": CHAIN3, "BOOL4": BOOL4}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    node = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance.py" not in report.nodeid or not node.startswith("test_criterion_"):
        return
    parts = node[len("test_criterion_"):].split("_", 1)
    num = int(parts[0])
    title = parts[1].replace("_", " ") if len(parts) > 1 else ""
    _ACCEPTANCE[num] = (title, "PASS" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        title, outcome = _ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d} {outcome}  {title}")
