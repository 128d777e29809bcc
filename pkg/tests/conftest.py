import numpy as np
import pytest

from groversim import PureState


def random_state(n: int, rng: np.random.Generator) -> PureState:
    amps = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    amps /= np.linalg.norm(amps)
    return PureState(n, amps)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
