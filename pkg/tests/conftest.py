import os

import numpy as np
import pytest

from qcdetector.basis import make_basis, parity_diagonal
from qcdetector.hamiltonian import ModelParams, build_hamiltonian
from qcdetector.solver import ground_state


def jobs_for_tests():
    env = os.environ.get("QCD_JOBS")
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


@pytest.fixture(scope="session")
def small_fs_ground():
    """Deep-FS ground state pair used by degeneracy/parity tests."""
    basis = make_basis(10, 40)
    params = ModelParams(epsilon=1.0, lam=1.2, j_coupling=0.2)
    h = build_hamiltonian(basis, params)
    gs = ground_state(h, parity_diag=parity_diagonal(basis))
    return basis, h, gs


def ground_at(n, m, eps, lam, j, tol=1e-9):
    basis = make_basis(n, m)
    h = build_hamiltonian(basis, ModelParams(eps, lam, j))
    return basis, ground_state(h, tol=tol, parity_diag=parity_diagonal(basis))


def random_amplitudes(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)
