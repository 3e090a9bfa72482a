import numpy as np
import pytest

from centralspin import CouplingSet


def random_couplings(rng: np.random.Generator, n_spins: int) -> CouplingSet:
    """Coupling set with |omega|/2pi up to 1 kHz, random signs."""
    return CouplingSet(2.0 * np.pi * rng.uniform(-1000.0, 1000.0, size=n_spins))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
