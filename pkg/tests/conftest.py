import numpy as np
import pytest

from hybridtvd import kernels


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running reproduction checks")
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.fixture(params=["numpy", "cython"])
def backend(request):
    if request.param == "cython" and not kernels.compiled_available():
        pytest.skip("compiled kernel not built")
    return kernels.get_backend(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# ---------------------------------------------------------- acceptance report

_CRITERIA = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    number, title = mark.args
    detail = dict(item.user_properties).get("detail", "")
    _CRITERIA[number] = (title, call.excinfo is None, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok, detail = _CRITERIA[number]
        terminalreporter.write_line(
            f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
