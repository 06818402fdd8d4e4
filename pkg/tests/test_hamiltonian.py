import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qcdetector.basis import make_basis, parity_diagonal, parity_operator
from qcdetector.hamiltonian import (
    ModelParams,
    QuenchProfile,
    build_hamiltonian,
    build_time_dependent,
    lambda_at,
    load_envelope_table,
)
from qcdetector.solver import ground_state
from qcdetector.validation import dense_hamiltonian_reference


def test_decoupled_limit_is_diagonal():
    basis = make_basis(4, 6)
    h = build_hamiltonian(basis, ModelParams(epsilon=1.0, lam=0.0, j_coupling=0.0)).matrix
    expected = basis.boson_occupancy() + basis.magnetic_number()
    assert_allclose(h.toarray(), np.diag(expected).astype(complex), atol=1e-14)
    gs = ground_state(
        build_hamiltonian(basis, ModelParams(1.0, 0.0, 0.0)),
        parity_diag=parity_diagonal(basis),
    )
    assert abs(gs.energy + 2.0) < 1e-12


def test_ground_energy_matches_tabulated_9x9():
    ref = dense_hamiltonian_reference(2, 2, 1.0, 0.5, 0.5)
    e_ref = np.linalg.eigvalsh(ref)[0]
    basis = make_basis(2, 2)
    h = build_hamiltonian(basis, ModelParams(1.0, 0.5, 0.5))
    assert_allclose(np.sort(np.linalg.eigvalsh(h.matrix.toarray())), np.linalg.eigvalsh(ref), atol=1e-12)
    gs = ground_state(h, parity_diag=parity_diagonal(basis))
    assert abs(gs.energy - e_ref) < 1e-9


def test_hermiticity_exact():
    basis = make_basis(6, 6)
    h = build_hamiltonian(basis, ModelParams(1.0, 0.7, 0.9)).matrix
    assert abs(h - h.conj().T).max() == 0.0


def test_parity_commutes():
    for n in (4, 8):
        basis = make_basis(n, 6)
        h = build_hamiltonian(basis, ModelParams(1.0, 0.6, 0.8)).matrix
        pi = parity_operator(basis).matrix
        assert abs(h @ pi - pi @ h).max() < 1e-10


def test_linearity_in_lambda():
    basis = make_basis(5, 5)
    p1 = ModelParams(1.0, 0.9, 0.4)
    p2 = ModelParams(1.0, 0.25, 0.4)
    h1 = build_hamiltonian(basis, p1).matrix
    h2 = build_hamiltonian(basis, p2).matrix
    coupling = build_time_dependent(basis, p2, QuenchProfile(0.25))[1].matrix
    assert abs((h1 - h2) - (0.9 - 0.25) * coupling).max() < 1e-14


def test_dimension_mismatch_rejected():
    from qcdetector.basis import BasisSpec

    bad = BasisSpec(n_spins=3, fock_cutoff=3, dim=7)
    with pytest.raises(ValueError):
        build_hamiltonian(bad, ModelParams(1.0, 0.1, 0.1))


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(epsilon=0.0)
    with pytest.raises(ValueError):
        ModelParams(lam=-0.1)
    with pytest.raises(ValueError):
        ModelParams(j_coupling=-1.0)


class TestQuenchProfile:
    def test_constant_when_amplitude_zero(self):
        prof = QuenchProfile(lambda0=0.7, delta_lambda=0.0)
        for t in (0.0, 5.0, 300.0):
            assert lambda_at(prof, t) == 0.7

    def test_tanh_saturation(self):
        prof = QuenchProfile(lambda0=0.7, delta_lambda=0.01, envelope="tanh_ramp", timescale=10.0)
        assert lambda_at(prof, 0.0) == 0.7
        assert abs(lambda_at(prof, 1e4) - 0.71) < 1e-12

    def test_envelope_self_consistency(self):
        prof = QuenchProfile(lambda0=0.70, delta_lambda=0.01, timescale=10.0)
        p = prof.envelope_at(40.0)
        assert lambda_at(prof, 40.0) == 0.70 + 0.01 * p

    @pytest.mark.parametrize("envelope", ["tanh_ramp", "exp_saturation", "sin2_ramp"])
    def test_builtin_envelopes_monotone_in_unit_interval(self, envelope):
        prof = QuenchProfile(lambda0=0.5, delta_lambda=0.1, envelope=envelope, timescale=7.0)
        t = np.linspace(0.0, 60.0, 400)
        p = prof.envelope_at(t)
        assert p[0] == 0.0
        assert np.all(p >= 0.0) and np.all(p <= 1.0)
        assert np.all(np.diff(p) >= -1e-15)

    def test_negative_time_rejected(self):
        prof = QuenchProfile(lambda0=0.5, delta_lambda=0.1)
        with pytest.raises(ValueError):
            lambda_at(prof, -0.1)

    def test_tabulated_interpolation_and_clamping(self):
        table = ((0.0, 1.0, 2.0, 4.0), (0.0, 0.25, 0.5, 1.0))
        prof = QuenchProfile(lambda0=0.6, delta_lambda=0.02, envelope="tabulated", table=table)
        assert lambda_at(prof, 0.5) == pytest.approx(0.6 + 0.02 * 0.125)
        assert lambda_at(prof, 100.0) == pytest.approx(0.62)

    def test_tabulated_validation(self):
        with pytest.raises(ValueError):
            QuenchProfile(lambda0=0.5, envelope="tabulated", table=((0.0, 0.0), (0.0, 0.5)))
        with pytest.raises(ValueError):
            QuenchProfile(lambda0=0.5, envelope="tabulated", table=((0.0, 1.0), (0.0, 1.5)))
        with pytest.raises(ValueError):
            QuenchProfile(lambda0=0.5, envelope="tabulated", table=((0.0, 1.0), (0.2, 1.0)))
        with pytest.raises(ValueError):
            QuenchProfile(lambda0=0.5, envelope="woosh")

    def test_envelope_file_roundtrip(self, tmp_path):
        path = tmp_path / "envelope.txt"
        path.write_text("0.0 0.0\n1.0 0.4\n3.0  1.0\n")
        table = load_envelope_table(path)
        prof = QuenchProfile(lambda0=0.1, delta_lambda=1.0, envelope="tabulated", table=table)
        assert prof.envelope_at(2.0) == pytest.approx(0.7)


class TestTimeDependentSplit:
    def test_reconstruction_exact_at_zero(self):
        basis = make_basis(6, 6)
        params = ModelParams(1.0, 0.45, 0.4)
        prof = QuenchProfile(lambda0=0.45, delta_lambda=0.2, timescale=7.0)
        rest, coupling, schedule = build_time_dependent(basis, params, prof)
        recon = rest.matrix + schedule(0.0) * coupling.matrix
        direct = build_hamiltonian(basis, params).matrix
        assert abs(recon - direct).max() < 1e-14

    def test_reconstruction_at_saturation(self):
        basis = make_basis(4, 4)
        params = ModelParams(1.0, 0.5, 0.3)
        prof = QuenchProfile(lambda0=0.5, delta_lambda=0.07, timescale=2.0)
        rest, coupling, schedule = build_time_dependent(basis, params, prof)
        recon = rest.matrix + schedule(1e5) * coupling.matrix
        direct = build_hamiltonian(basis, ModelParams(1.0, 0.57, 0.3)).matrix
        assert abs(recon - direct).max() < 1e-14

    def test_reconstruction_random_times(self):
        rng = np.random.default_rng(11)
        basis = make_basis(6, 6)
        params = ModelParams(1.0, 0.3, 0.9)
        prof = QuenchProfile(lambda0=0.3, delta_lambda=0.05, envelope="exp_saturation", timescale=4.0)
        rest, coupling, schedule = build_time_dependent(basis, params, prof)
        for t in rng.uniform(0.0, 30.0, size=5):
            lam = lambda_at(prof, t)
            recon = rest.matrix + schedule(t) * coupling.matrix
            direct = build_hamiltonian(basis, ModelParams(1.0, lam, 0.9)).matrix
            assert abs(recon - direct).max() < 1e-14


def test_omega0_scales_everything():
    basis = make_basis(3, 3)
    h1 = build_hamiltonian(basis, ModelParams(1.0, 0.4, 0.6, omega0=1.0)).matrix
    h2 = build_hamiltonian(basis, ModelParams(1.0, 0.4, 0.6, omega0=2.0)).matrix
    assert abs(h2 - 2.0 * h1).max() < 1e-14
