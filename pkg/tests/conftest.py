import numpy as np
import pytest

from heatbound.ball_spectrum import build_spectrum


@pytest.fixture(scope="session")
def disk_spectrum():
    """Shared d=2 table; large enough for traces down to t ~ 0.012."""
    return build_spectrum(2, 4000.0)


@pytest.fixture(scope="session")
def ball_spectrum_small():
    return build_spectrum(3, 400.0)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
