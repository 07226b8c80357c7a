import numpy as np
import pytest

from lindrec.engine import LindbladAnsatz, LindbladianParams


def random_hermitian(rng, dim):
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (m + m.conj().T) / 2


def random_density(rng, dim):
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


def random_ansatz(rng, dim, n_drive, n_jump):
    drives = tuple(random_hermitian(rng, dim) for _ in range(n_drive))
    jumps = tuple(
        rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        for _ in range(n_jump)
    )
    return LindbladAnsatz(h_ops=drives, jump_ops=jumps)


def random_params(rng, n_drive, n_jump, hermitian_gamma=False):
    gamma = rng.standard_normal((n_jump, n_jump)) + 1j * rng.standard_normal(
        (n_jump, n_jump)
    )
    if hermitian_gamma:
        gamma = (gamma + gamma.conj().T) / 2
    return LindbladianParams(c=rng.standard_normal(n_drive), gamma=gamma)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
