import numpy as np
import pytest

from desyncstab import products


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=["cython", "python"])
def backend(request):
    if request.param == "cython" and products._kernel is None:
        pytest.skip("compiled kernel not built")
    return request.param


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
