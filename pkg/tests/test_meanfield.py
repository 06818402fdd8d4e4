import math

import numpy as np
import pytest

from qcdetector.hamiltonian import ModelParams
from qcdetector.meanfield import (
    PhaseBoundaries,
    classify,
    energy_per_spin,
    minimize,
)


def test_all_down_energy():
    assert energy_per_spin(ModelParams(1.0, 0.3, 0.7), 0.0, math.pi, 0.0) == pytest.approx(-0.5)


def test_fs_stationary_value():
    lam = 0.8
    theta = math.acos(-1.0 / (4 * lam**2))
    e = energy_per_spin(ModelParams(1.0, lam, 0.0), -lam * math.sin(theta), theta, 0.0)
    assert e == pytest.approx(-lam**2 - 1.0 / (16 * lam**2), abs=1e-12)
    assert e == pytest.approx(-0.73765625, abs=1e-10)


def test_fn_stationary_value():
    j = 1.0
    theta = math.acos(-1.0 / (2 * j))
    e = energy_per_spin(ModelParams(1.0, 0.0, j), 0.0, theta, math.pi / 2)
    assert e == pytest.approx(-j / 2 - 1.0 / (8 * j), abs=1e-12)
    assert e == pytest.approx(-0.625, abs=1e-12)


class TestMinimize:
    def test_pn_region(self):
        sol = minimize(ModelParams(1.0, 0.3, 0.3))
        assert sol.phase == "PN"
        assert abs(sol.alpha) < 1e-8
        assert sol.theta == pytest.approx(math.pi, abs=1e-6)
        assert sol.energy_per_spin == pytest.approx(-0.5, abs=1e-12)
        assert sol.degenerate_partner is None

    def test_fs_region(self):
        sol = minimize(ModelParams(1.0, 0.8, 1.0))
        assert sol.phase == "FS"  # 2 lambda^2 = 1.28 > J
        zs = sol.order_parameters()[0]
        assert zs == pytest.approx(0.54234375, abs=1e-9)
        assert sol.degenerate_partner is not None
        alpha2, _, phi2 = sol.degenerate_partner
        assert alpha2 == pytest.approx(-sol.alpha)
        assert abs((phi2 - sol.phi) % (2 * math.pi) - math.pi) < 1e-9

    def test_fn_region(self):
        sol = minimize(ModelParams(1.0, 0.6, 1.0))
        assert sol.phase == "FN"  # J = 1 > 2 lambda^2 = 0.72
        zy = sol.order_parameters()[2]
        assert zy == pytest.approx(0.1875, abs=1e-9)
        assert math.cos(sol.theta) == pytest.approx(-0.5, abs=1e-8)
        assert sol.phi == pytest.approx(math.pi / 2, abs=1e-6) or sol.phi == pytest.approx(
            3 * math.pi / 2, abs=1e-6
        )
        assert sol.degenerate_partner is not None

    def test_stationarity_relation(self):
        for lam, j in [(0.9, 0.3), (0.7, 0.2), (1.2, 1.0)]:
            sol = minimize(ModelParams(1.0, lam, j))
            if sol.phase != "FS":
                continue
            expected = -lam * math.sin(sol.theta) * math.cos(sol.phi)
            assert abs(sol.alpha.real - expected) < 1e-8
            assert abs(sol.alpha.imag) < 1e-8

    def test_never_worse_than_all_down(self):
        rng = np.random.default_rng(2)
        for _ in range(25):
            params = ModelParams(1.0, float(rng.uniform(0, 1.4)), float(rng.uniform(0, 1.4)))
            sol = minimize(params)
            assert sol.energy_per_spin <= -0.5 + 1e-12


class TestClassify:
    def test_triple_point(self):
        label, _ = classify(ModelParams(1.0, 0.5, 0.5))
        assert label == "triple_point"

    def test_first_order_line_with_tolerance(self):
        # 0.707 is within 3.1e-4 of sqrt(1/2); classification at that scale
        # needs the caller-supplied tolerance
        label, dist = classify(ModelParams(1.0, 0.707, 1.0), boundary_tol=1e-3)
        assert label == "first_order_boundary"
        assert abs(dist["first_order"]) < 1e-3
        label_tight, _ = classify(ModelParams(1.0, 0.707, 1.0))
        assert label_tight == "FN"

    def test_pn_bulk(self):
        label, dist = classify(ModelParams(1.0, 0.2, 0.2))
        assert label == "PN"
        assert dist["lambda_c2"] == pytest.approx(-0.3)
        assert dist["j_c2"] == pytest.approx(-0.3)

    def test_second_order_boundaries(self):
        assert classify(ModelParams(1.0, 0.5, 0.2))[0] == "lambda_c2_boundary"
        assert classify(ModelParams(1.0, 0.2, 0.5))[0] == "j_c2_boundary"

    def test_agrees_with_minimizer_off_boundary(self):
        for lam in np.linspace(0.1, 1.2, 12):
            for j in np.linspace(0.1, 1.2, 12):
                params = ModelParams(1.0, float(lam), float(j))
                label, dist = classify(params)
                if min(abs(d) for d in dist.values()) < 1e-6:
                    continue
                assert label == minimize(params).phase


class TestBoundaries:
    def test_critical_values(self):
        b = PhaseBoundaries(1.0)
        assert b.lambda_c2 == 0.5
        assert b.j_c2 == 0.5
        assert b.triple_point == (0.5, 0.5)
        assert b.lambda_c1(1.0) == pytest.approx(math.sqrt(0.5))

    def test_first_order_line_terminates_at_triple_point(self):
        b = PhaseBoundaries(1.0)
        assert b.lambda_c1(b.j_c2) == pytest.approx(b.lambda_c2)

    def test_critical_lambda_continuous(self):
        b = PhaseBoundaries(1.0)
        assert b.critical_lambda(0.2) == 0.5
        assert b.critical_lambda(0.5) == pytest.approx(0.5)
        assert b.critical_lambda(1.0) == pytest.approx(math.sqrt(0.5))

    def test_energy_crossing_on_first_order_line(self):
        # e_FN(J = 2 lambda^2) = e_FS analytically
        for lam in (0.6, 0.8, 1.0):
            j = 2 * lam**2
            theta_fn = math.acos(-1.0 / (2 * j))
            e_fn = energy_per_spin(ModelParams(1.0, lam, j), 0.0, theta_fn, math.pi / 2)
            theta_fs = math.acos(-1.0 / (4 * lam**2))
            e_fs = energy_per_spin(ModelParams(1.0, lam, j), -lam * math.sin(theta_fs), theta_fs, 0.0)
            assert abs(e_fn - e_fs) < 1e-12
            assert e_fn == pytest.approx(-lam**2 - 1.0 / (16 * lam**2), abs=1e-12)


def test_numeric_crossing_matches_analytic():
    for lam in (0.6, 0.8, 1.0):
        lo, hi = 1.2 * lam**2, 2.8 * lam**2
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            e_fs = minimize(ModelParams(1.0, lam, 0.0)).energy_per_spin
            sol = minimize(ModelParams(1.0, lam, mid))
            if sol.energy_per_spin >= e_fs - 1e-15:
                lo = mid
            else:
                hi = mid
        assert abs(0.5 * (lo + hi) - 2 * lam**2) < 1e-6
