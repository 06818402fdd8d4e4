import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.special import gammaln

from qcdetector.basis import make_basis, parity_diagonal, spin_operator
from qcdetector.hamiltonian import ModelParams, build_hamiltonian
from qcdetector.observables import GAIN_FLOOR, gain, measure, sqnr
from qcdetector.solver import ground_state, ground_state_even_parity
from qcdetector.basis import parity_operator

from conftest import ground_at, random_amplitudes


def test_decoupled_ground_moments():
    n = 4
    basis, gs = ground_at(n, 5, 1.0, 0.0, 0.0)
    obs = measure(gs.state, basis)
    assert abs(obs.zeta_S) < 1e-10
    assert abs(obs.n_mean) < 1e-10
    assert abs(obs.n_var) < 1e-10
    assert abs(obs.m_z + 0.5) < 1e-10
    # all-down Dicke state: <Sx^2> = <Sy^2> = N/4
    assert abs(obs.zeta_Mx - 1.0 / (4 * n)) < 1e-10
    assert abs(obs.zeta_My - 1.0 / (4 * n)) < 1e-10


def test_fn_meanfield_limit():
    basis, gs = ground_at(40, 12, 1.0, 0.3, 1.0)
    obs = measure(gs.state, basis)
    assert abs(obs.zeta_My - 0.1875) < 0.03
    assert obs.zeta_S < 0.02


def test_fs_meanfield_limit():
    basis, gs = ground_at(40, 60, 1.0, 0.8, 0.0)
    obs = measure(gs.state, basis)
    assert abs(obs.zeta_S - 0.54234375) < 0.05


def test_dimension_mismatch():
    basis = make_basis(3, 3)
    with pytest.raises(ValueError):
        measure(np.ones(7) / math.sqrt(7), basis)


def test_gain_basics():
    assert gain(5.0, 5.0) == 1.0
    assert gain(10.0, 2.0) == 5.0
    assert math.isnan(gain(3.0, 0.0))
    assert math.isnan(gain(3.0, GAIN_FLOOR / 2))


def test_sqnr_basics():
    assert sqnr(5.0, 5.0) == 1.0 * 5.0
    assert math.isinf(sqnr(2.0, 0.0))
    assert math.isnan(sqnr(0.0, 0.0))


def test_coherent_state_sqnr():
    basis = make_basis(2, 40)
    alpha2 = 5.0
    n = np.arange(41)
    coeff = np.exp(-alpha2 / 2.0 + 0.5 * n * math.log(alpha2) - 0.5 * gammaln(n + 1.0))
    psi = np.zeros(basis.dim, dtype=complex)
    psi[n * (basis.n_spins + 1)] = coeff
    psi /= np.linalg.norm(psi)
    obs = measure(psi, basis)
    assert abs(obs.n_mean - 5.0) < 1e-9
    assert abs(sqnr(obs.n_mean, obs.n_var) - 5.0) < 1e-8


def test_variance_nonnegative_random_states():
    rng = np.random.default_rng(5)
    basis = make_basis(6, 7)
    for _ in range(20):
        obs = measure(random_amplitudes(rng, basis.dim), basis)
        assert obs.n_var >= -1e-12
        assert obs.zeta_S >= 0.0
        assert -0.5 <= obs.m_z <= 0.5
        bound = 0.25 * (1.0 + 2.0 / basis.n_spins)
        assert 0.0 <= obs.zeta_Mx <= bound + 1e-12
        assert 0.0 <= obs.zeta_My <= bound + 1e-12


def test_sum_rule_exact():
    rng = np.random.default_rng(9)
    basis = make_basis(7, 4)
    sz = spin_operator(basis, "z").matrix
    s = basis.spin
    for _ in range(5):
        psi = random_amplitudes(rng, basis.dim)
        obs = measure(psi, basis)
        sz2 = float(np.vdot(sz @ psi, sz @ psi).real) / basis.n_spins**2
        total = obs.zeta_Mx + obs.zeta_My + sz2
        assert abs(total - s * (s + 1) / basis.n_spins**2) < 1e-12


def test_parity_even_mixtures(small_fs_ground):
    """Any mixture of the quasi-degenerate FS pair measures identically."""
    basis, h, gs = small_fs_ground
    even = ground_state_even_parity(h, parity_operator(basis))
    par = parity_diagonal(basis)
    # odd partner: restrict the solve to the -1 sector by flipping parity
    odd = ground_state(h, parity_diag=par)
    if odd.parity > 0:
        from qcdetector.basis import SparseOperator
        import scipy.sparse as sp

        idx = np.where(par < 0)[0]
        sub = h.matrix[idx][:, idx]
        w, v = np.linalg.eigh(sub.toarray()) if sub.shape[0] <= 4096 else (None, None)
        amp = np.zeros(basis.dim, dtype=complex)
        amp[idx] = v[:, 0]
        odd_state = amp
    else:
        odd_state = odd.state.amplitudes
    ref = measure(even.state, basis)
    for angle in (0.3, 1.1, 2.0):
        mix = math.cos(angle) * even.state.amplitudes + math.sin(angle) * odd_state
        mix /= np.linalg.norm(mix)
        obs = measure(mix, basis)
        for field in ("zeta_S", "zeta_Mx", "zeta_My", "m_z", "n_mean", "n_var"):
            assert abs(getattr(obs, field) - getattr(ref, field)) < 1e-10, field


@pytest.mark.slow
def test_fs_side_value_at_paper_scale():
    """Just past the first-order point at N=80 the superradiant order
    parameter approaches the mean-field value lambda^2 (1 - 1/(16 lambda^4))."""
    basis, gs = ground_at(80, 80, 1.0, 0.71, 1.0)
    obs = measure(gs.state, basis)
    mf = 0.71**2 * (1 - 1.0 / (16 * 0.71**4))
    assert abs(obs.zeta_S - mf) < 0.03
