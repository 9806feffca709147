import pytest

import paymech

from . import helpers


@pytest.fixture(scope="session")
def commerce():
    return paymech.build_commerce(
        paymech.CommerceParams(x=100.0, x_prime=50.0, y=150.0, eps=0.1)
    )


@pytest.fixture(scope="session")
def pvc():
    return paymech.build_pvc(
        paymech.PvcParams(n=2, eps=0.5, u_plus=2.0, u_minus=-1.0, delta=1.0)
    )


def pytest_terminal_summary(terminalreporter):
    lines = getattr(helpers, "ACCEPTANCE_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
