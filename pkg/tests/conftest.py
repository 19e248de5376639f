import numpy as np
import pytest

from identangle.states import SingleParticleKet, Spin

LR_LABELS = (
    ("L", Spin.UP),
    ("L", Spin.DOWN),
    ("R", Spin.UP),
    ("R", Spin.DOWN),
)


def random_ket(rng, labels=LR_LABELS):
    v = rng.normal(size=len(labels)) + 1j * rng.normal(size=len(labels))
    v /= np.linalg.norm(v)
    return SingleParticleKet({lab: complex(a) for lab, a in zip(labels, v)})


def random_complex_matrix(rng, n):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
