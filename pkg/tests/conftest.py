import numpy as np
import pytest

from tcdeco.closedform import AtomPairState


def random_hermitian(rng, dim):
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (x + x.conj().T)


def random_density(rng, dim):
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = x @ x.conj().T
    return rho / np.trace(rho).real


def random_pair_state(rng) -> AtomPairState:
    """Random reduced state of the allowed form, positivity guaranteed by
    drawing the coherence inside |a3| <= sqrt(a2 a5)."""
    a1, a2, a5, a6 = rng.dirichlet(np.ones(4))
    mag = np.sqrt(a2 * a5) * rng.uniform(0.0, 1.0)
    phase = rng.uniform(0.0, 2.0 * np.pi)
    return AtomPairState(
        a1=a1, a2=a2, a3=mag * np.exp(1j * phase), a5=a5, a6=a6
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
