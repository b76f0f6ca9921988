import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the numba kernels once, outside any timed test."""
    from borelcontour import AnalyticFunction, integrate, ray_contour
    integrate(ray_contour(), AnalyticFunction.constant(1.0), 1.0)
    integrate(ray_contour(), AnalyticFunction.rational([-1.0], [1.0]), 1.0, beta=0.5)


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.summary_lines():
            terminalreporter.write_line(line)
