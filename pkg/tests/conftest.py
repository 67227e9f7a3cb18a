import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from starqc.func_zoo import make_clover, make_example312, make_quadratic

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def clover():
    return make_clover()


@pytest.fixture(scope="session")
def ex312():
    return make_example312(0.3, 2, 0)


@pytest.fixture(scope="session")
def quad21():
    return make_quadratic(2, 1)


@pytest.fixture(scope="session")
def quad22():
    return make_quadratic(2, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_log(request):
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
