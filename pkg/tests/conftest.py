import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from kwgauge.groups import build_group
from kwgauge.surface import sphere_cube, sphere_tetra, torus

settings.register_profile("default", max_examples=30, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def S3():
    return build_group("S3")


@pytest.fixture(scope="session")
def small_lattices():
    return [torus(2, 2), torus(2, 3), sphere_tetra(), sphere_cube()]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance
    lines = [test_acceptance.RESULTS[k] for k in sorted(test_acceptance.RESULTS)]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
