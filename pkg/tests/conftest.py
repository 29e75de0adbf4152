import numpy as np
import pytest

from infopriv.channels import identity_channel, randomized_response, random_channel, truncated_geometric, xor_channel


def bsc(p: float):
    """Binary symmetric channel on one binary record."""
    return randomized_response((2,), p)


def h2(p: float) -> float:
    if p in (0.0, 1.0):
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def fixture_fleet():
    """Small named channels used across the analysis tests."""
    rng = np.random.default_rng(7)
    return {
        "xor2": xor_channel(2),
        "identity1": identity_channel((2,)),
        "identity2": identity_channel((2, 2)),
        "rr025": randomized_response((2,), 0.25),
        "rr03_2rec": randomized_response((2, 2), 0.3),
        "geometric2": truncated_geometric(2, 0.5),
        "random22": random_channel((2, 2), 3, rng),
    }
