import random

import pytest

from ltcalc.suites import build_context


@pytest.fixture(scope="session")
def mult3():
    """Multiplicative model over Q_3, moderate working size."""
    return build_context(3, "multiplicative", pi_prec=20, z_len=48)


@pytest.fixture(scope="session")
def special3():
    return build_context(3, "special", pi_prec=20, z_len=48)


@pytest.fixture(scope="session")
def mult5():
    return build_context(5, "multiplicative", pi_prec=20, z_len=48)


@pytest.fixture(scope="session")
def unram25():
    """Special model over the unramified quadratic extension of Q_5."""
    return build_context(5, "special", field_kind="unramified", degree=2,
                         pi_prec=16, z_len=32)


@pytest.fixture
def rng():
    return random.Random(20260810)
