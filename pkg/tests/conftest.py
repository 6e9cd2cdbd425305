import numpy as np
import pytest

from locc_lab import Ensemble, PureState, SchmidtVector, random_pure


def bell_state() -> PureState:
    return PureState(np.array([1, 0, 0, 1]) / np.sqrt(2), (2, 2))


def basis_state(dims, a, b) -> PureState:
    vec = np.zeros(dims[0] * dims[1], dtype=complex)
    vec[a * dims[1] + b] = 1.0
    return PureState(vec, dims)


def random_schmidt_vector(rng: np.random.Generator, n: int) -> SchmidtVector:
    vals = np.sort(rng.dirichlet(np.ones(n)))[::-1]
    return SchmidtVector(vals)


def random_ensemble(rng: np.random.Generator, dims, size: int) -> Ensemble:
    weights = rng.dirichlet(np.ones(size))
    members = []
    for w in weights:
        members.append((float(w), random_pure(dims, rng)))
    return Ensemble(tuple(members))


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
