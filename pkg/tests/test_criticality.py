import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qcdetector.basis import make_basis
from qcdetector.hamiltonian import ModelParams, QuenchProfile
from qcdetector.criticality import (
    QuenchSetup,
    chi_max_search,
    chi_scan,
    estimation_error,
    fit_scaling,
    locate_crossover,
    run_quench,
    slope_vs_j,
)
from qcdetector.validation import dense_hamiltonian_reference


def test_fit_roundtrip_paper_constants():
    ns = np.array([20, 30, 40, 50, 60, 70, 80], dtype=float)
    ys = 0.067 * ns**2 - 1.881 * ns + 22.62
    fit = fit_scaling(list(zip(ns, ys)), "quadratic")
    assert_allclose(fit.coefficients, [0.067, -1.881, 22.62], atol=1e-9)
    assert fit.r_squared > 1 - 1e-12


def test_linear_data_under_quadratic_model():
    ns = np.arange(10, 80, 10, dtype=float)
    fit = fit_scaling(list(zip(ns, 2.5 * ns - 3.0)), "quadratic")
    assert abs(fit.coefficients[0]) < 1e-9


def test_fit_validation():
    with pytest.raises(ValueError):
        fit_scaling([(10, 1.0), (20, 2.0), (30, 3.0)], "quadratic")
    with pytest.raises(ValueError):
        fit_scaling([(10, 1.0), (20, 2.0)], "linear")
    with pytest.raises(ValueError):
        fit_scaling([(10, 1.0), (10, 2.0), (20, 1.0), (30, 4.0)], "quadratic")
    with pytest.raises(ValueError):
        fit_scaling([(10, 1.0), (20, 2.0), (30, 3.0), (40, 4.0)], "cubic")


def test_synthetic_slope_table_recovery():
    n_list = [20, 40, 60, 80]
    slope, intercept = 0.31, 1.7
    fit = fit_scaling([(n, slope * n + intercept) for n in n_list], "linear")
    assert fit.coefficients[0] == pytest.approx(slope, abs=1e-12)
    assert fit.coefficients[1] == pytest.approx(intercept, abs=1e-12)


def test_estimation_error():
    assert estimation_error(300.94, 0.375) == pytest.approx(0.375 / 300.94)
    assert estimation_error(5.0, 0.0) == 0.0
    assert estimation_error(10.0, 0.4) == pytest.approx(estimation_error(20.0, 0.4) * 2)
    with pytest.raises(ValueError):
        estimation_error(0.0, 0.1)
    with pytest.raises(ValueError):
        estimation_error(-2.0, 0.1)


def test_chi_flat_in_normal_phase():
    basis = make_basis(8, 8)
    scan = chi_scan(basis, ModelParams(1.0, 0.0, 0.2), np.linspace(0.05, 0.15, 3))
    assert np.all(np.abs(scan.chi) < 0.02)
    assert np.all(scan.zeta_S < 1e-3)
    assert scan.converged.all()


def test_chi_scan_matches_dense_oracle():
    n = m = 10
    basis = make_basis(n, m)
    grid = np.linspace(0.60, 0.70, 5)
    scan = chi_scan(basis, ModelParams(1.0, 0.0, 0.9), grid)
    nb = basis.boson_occupancy()
    for k, lam in enumerate(grid):
        vals = []
        for sgn in (+0.5, -0.5):
            h = dense_hamiltonian_reference(n, m, 1.0, lam + sgn * scan.fd_step, 0.9)
            w, v = np.linalg.eigh(h)
            vals.append(float(nb @ np.abs(v[:, 0]) ** 2))
        chi_ref = (vals[0] - vals[1]) / scan.fd_step / n
        assert abs(scan.chi[k] - chi_ref) < 1e-8


def test_chi_scan_validation():
    basis = make_basis(4, 4)
    with pytest.raises(ValueError):
        chi_scan(basis, ModelParams(1.0, 0.0, 0.5), [0.1], fd_step=0.0)
    with pytest.raises(ValueError):
        chi_scan(basis, ModelParams(1.0, 0.0, 0.5), [1e-5], fd_step=1e-3)


def test_fd_step_halving_consistency():
    """At a smooth point the central difference converges at O(step^2)."""
    basis = make_basis(8, 8)
    params = ModelParams(1.0, 0.0, 1.0)
    lam = [0.60]
    chis = {}
    for fd in (4e-3, 2e-3, 1e-3):
        chis[fd] = chi_scan(basis, params, lam, fd_step=fd).chi[0]
    d1 = abs(chis[4e-3] - chis[2e-3])
    d2 = abs(chis[2e-3] - chis[1e-3])
    assert 3.0 <= d1 / d2 <= 5.0


def test_chi_max_search_refines_peak():
    basis = make_basis(20, 20)
    params = ModelParams(1.0, 0.0, 1.0)
    scan = chi_max_search(basis, params, (0.64, 0.72), coarse_steps=17, refine_steps=11, fd_step=5e-4)
    assert scan.converged.all()
    # the N=20 crossover sits below the asymptotic critical coupling
    assert 0.66 < scan.lambda_at_max < 0.71
    assert scan.chi_max > 5.0
    assert np.all(np.diff(scan.lambdas) > 0)


def test_locate_crossover_tracks_transition():
    lam_star = locate_crossover(20, 20, 1.0)
    assert 0.680 < lam_star < 0.695
    lam_star_40 = locate_crossover(40, 40, 1.0)
    assert lam_star < lam_star_40 < math.sqrt(0.5)


def test_run_quench_records():
    prof = QuenchProfile(lambda0=0.66, delta_lambda=0.01, timescale=10.0)
    series = run_quench(12, 12, 1.0, prof, t_final=8.0, dt=0.005, record_stride=100)
    assert series.gain[0] == pytest.approx(1.0, abs=1e-9)
    assert np.all(np.diff(series.times) > 0)
    assert series.lambda_t[0] == pytest.approx(0.66)
    assert len(series.times) == len(series.gain) == len(series.sqnr) == len(series.envelope)
    assert np.all(np.abs(series.norm_drift) < 1e-7)
    g_max, t_at, sqnr_at = series.peak_gain()
    assert g_max >= 1.0 - 1e-9
    assert 0 <= t_at <= 8.0


def test_quench_setup_bias_modes():
    setup = QuenchSetup(bias_mode="fixed")
    assert setup.bias(1.0) == pytest.approx(math.sqrt(0.5) - 0.005)
    assert setup.bias(0.2) == pytest.approx(0.5 - 0.005)
    tracked = QuenchSetup(bias_mode="tracked")
    b20 = tracked.bias(1.0, 20, 20)
    assert 0.675 < b20 < 0.690


@pytest.mark.slow
def test_slope_vs_j_contrast_small():
    rows = slope_vs_j([0.2, 1.0], [12, 16, 20, 24], QuenchSetup(t_final=40.0, record_stride=40))
    by_j = {r.j_coupling: r for r in rows}
    assert by_j[1.0].slope > 3.0 * by_j[0.2].slope
    assert by_j[1.0].r_squared > 0.9
    assert len(by_j[1.0].g_max) == 4


def test_chi_consistent_with_zeta_column():
    """chi matches the grid derivative of its own zeta_S column at smooth
    points (away from the finite-N parity-sector level crossings)."""
    basis = make_basis(8, 8)
    grid = np.linspace(0.10, 0.30, 11)
    scan = chi_scan(basis, ModelParams(1.0, 0.0, 0.2), grid)
    interior = np.gradient(scan.zeta_S, scan.lambdas)[2:-2]
    assert np.abs(interior - scan.chi[2:-2]).max() < 1e-3


def test_chi_scan_parallel_matches_serial():
    basis = make_basis(6, 6)
    grid = np.linspace(0.3, 0.5, 4)
    serial = chi_scan(basis, ModelParams(1.0, 0.0, 0.6), grid, jobs=1)
    parallel = chi_scan(basis, ModelParams(1.0, 0.0, 0.6), grid, jobs=2)
    assert np.array_equal(serial.chi, parallel.chi)
    assert np.array_equal(serial.zeta_S, parallel.zeta_S)
