"""Cross-module oracle harness.

Every derived number asserted elsewhere in the artifact is regenerated
here from an independent route: closed-form expressions, dense
diagonalization of an explicitly tabulated matrix, or a dense
time-ordered propagator.  ``run_oracle_suite`` executes the cases at desk
scale (N <= 12 unless noted); ``figure_regression`` runs scaled-down
recipes of the published figures and checks their structural assertions.
Tolerances live in one table keyed by case id.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .basis import make_basis, parity_diagonal, parity_operator, spin_operator, boson_operator
from .criticality import (
    QuenchSetup,
    chi_max_search,
    chi_scan,
    estimation_error,
    fit_scaling,
    locate_crossover,
    run_quench,
    slope_vs_j,
)
from .hamiltonian import ModelParams, QuenchProfile, build_hamiltonian, build_time_dependent
from .husimi import boson_q, coherent_spin_amplitudes, local_maxima, spin_q
from .meanfield import PhaseBoundaries, classify, energy_per_spin, minimize
from .observables import measure, sqnr
from .solver import EvolutionConfig, dense_spectrum_oracle, evolve, ground_state, ground_state_even_parity

# one audit point for every oracle tolerance, keyed by case id
TOLERANCES = {
    "basis.commutator_xy": 1e-12,
    "basis.casimir": 1e-12,
    "basis.boson_commutator": 1e-12,
    "basis.ladder_root2": 1e-14,
    "hamiltonian.decoupled_ground": 1e-12,
    "hamiltonian.dense_9x9": 1e-9,
    "hamiltonian.parity_commutator": 1e-10,
    "hamiltonian.linearity": 1e-14,
    "hamiltonian.reconstruction": 1e-14,
    "solver.decoupled_gap": 1e-10,
    "solver.dense_agreement": 1e-9,
    "solver.projected_energy": 1e-6,
    "solver.quench_fidelity": 1e-8,
    "solver.stationary_gain": 1e-6,
    "observables.coherent_sqnr": 1e-9,
    "observables.sum_rule": 1e-12,
    "observables.fs_meanfield_zeta": 0.05,
    "observables.fn_meanfield_zeta": 0.03,
    "meanfield.pn_energy": 1e-12,
    "meanfield.fs_energy": 1e-9,
    "meanfield.fn_energy": 1e-9,
    "meanfield.crossing": 1e-6,
    "meanfield.stationarity": 1e-8,
    "criticality.fit_roundtrip": 1e-9,
    "criticality.linear_under_quadratic": 1e-9,
    "criticality.estimation_error": 1e-12,
    # deep-PN chi is perturbatively lambda/(2N), not exactly zero; 0.02 is
    # three orders below the critical-point values it contrasts with
    "criticality.pn_flat": 0.02,
    "criticality.dense_scan_agreement": 1e-8,
    "husimi.rotation_convention": 1e-10,
    "husimi.vacuum_q": 1e-12,
    "husimi.boson_normalization": 1e-3,
    "husimi.spin_normalization": 1e-3,
    "husimi.parity_symmetry": 1e-10,
    "fig2.second_order_lambda": 0.06,
    "fig2.first_order_lambda": 0.035,
    "fig3.jump_location": 0.035,
    "fig3.chi_growth": 0.0,
    "fig4.localization": 0.0,
    "fig4.contrast": 0.0,
    "fig5.linearity": 0.0,
    "fig5.slope_ratio": 0.0,
    "figS1.pn_peaks": 0.0,
    "figS1.fs_peaks": 0.0,
    "figS2.fn_lobes": 0.05,
}


@dataclass(frozen=True)
class OracleReport:
    case_id: str
    quantity: str
    reference: float
    provenance: str
    computed: float
    tolerance: float
    passed: bool

    @property
    def abs_deviation(self) -> float:
        return abs(self.computed - self.reference)

    @property
    def rel_deviation(self) -> float:
        scale = max(abs(self.reference), 1e-300)
        return self.abs_deviation / scale


def _deviation_report(case_id, quantity, reference, computed, provenance):
    tol = TOLERANCES[case_id]
    return OracleReport(
        case_id=case_id,
        quantity=quantity,
        reference=float(reference),
        provenance=provenance,
        computed=float(computed),
        tolerance=float(tol),
        passed=bool(abs(computed - reference) <= tol),
    )


def _bool_report(case_id, quantity, ok, provenance):
    return OracleReport(
        case_id=case_id,
        quantity=quantity,
        reference=1.0,
        provenance=provenance,
        computed=1.0 if ok else 0.0,
        tolerance=0.0,
        passed=bool(ok),
    )


def dense_hamiltonian_reference(n_spins, fock_cutoff, epsilon, lam, j_coupling):
    """Dense H tabulated directly from the ladder formulas.

    Kept deliberately independent of the basis/hamiltonian modules: indices,
    couplings, and matrix elements are rebuilt from scratch here.
    """
    s = n_spins / 2.0
    dim = (n_spins + 1) * (fock_cutoff + 1)
    h = np.zeros((dim, dim), dtype=complex)

    def idx(nb, mi):
        return nb * (n_spins + 1) + mi

    for nb in range(fock_cutoff + 1):
        for mi in range(n_spins + 1):
            m = mi - s
            i = idx(nb, mi)
            h[i, i] += nb + epsilon * m
            # -(2J/N) S_y^2 with S_y = (S+ - S-)/2i:
            # S_y^2 = (S+S- + S-S+ - S+S+ - S-S-)/4
            up = s * (s + 1) - m * (m + 1)
            dn = s * (s + 1) - m * (m - 1)
            h[i, i] += -(2.0 * j_coupling / n_spins) * 0.25 * (up + dn)
            if mi + 2 <= n_spins:
                m1 = m + 1
                coeff = math.sqrt(up) * math.sqrt(s * (s + 1) - m1 * (m1 + 1))
                h[idx(nb, mi + 2), i] += (2.0 * j_coupling / n_spins) * 0.25 * coeff
            if mi - 2 >= 0:
                m1 = m - 1
                coeff = math.sqrt(dn) * math.sqrt(s * (s + 1) - m1 * (m1 - 1))
                h[idx(nb, mi - 2), i] += (2.0 * j_coupling / n_spins) * 0.25 * coeff
            # (2 lam / sqrt(N)) S_x (d + d'), S_x = (S+ + S-)/2
            for nb2, bcoeff in ((nb - 1, math.sqrt(nb)), (nb + 1, math.sqrt(nb + 1))):
                if not 0 <= nb2 <= fock_cutoff:
                    continue
                if mi + 1 <= n_spins:
                    h[idx(nb2, mi + 1), i] += (lam / math.sqrt(n_spins)) * math.sqrt(up) * bcoeff
                if mi - 1 >= 0:
                    h[idx(nb2, mi - 1), i] += (lam / math.sqrt(n_spins)) * math.sqrt(dn) * bcoeff
    return h


def dense_propagator_oracle(n_spins, fock_cutoff, epsilon, j_coupling, profile, t_final, dt):
    """Time-ordered product of midpoint dense exponentials (reference)."""
    basis = make_basis(n_spins, fock_cutoff)
    params = ModelParams(epsilon, profile.lambda0, j_coupling)
    h = build_hamiltonian(basis, params)
    gs = ground_state(h, parity_diag=parity_diagonal(basis))
    rest, coup, schedule = build_time_dependent(basis, params, profile)
    rest_d = rest.matrix.toarray()
    coup_d = coup.matrix.toarray()
    psi = gs.state.amplitudes.copy()
    steps = int(round(t_final / dt))
    for k in range(steps):
        t_mid = (k + 0.5) * dt
        u = sla.expm(-1j * dt * (rest_d + schedule(t_mid) * coup_d))
        psi = u @ psi
    return gs, psi


def _basis_cases():
    reports = []
    b = make_basis(8, 3)
    sx, sy, sz = (spin_operator(b, a).matrix for a in "xyz")
    dev = abs((sx @ sy - sy @ sx) - 1j * sz).max()
    reports.append(_deviation_report("basis.commutator_xy", "deviation of [Sx,Sy] from iSz", 0.0, dev, "closed-form"))
    s = b.spin
    casimir = (sx @ sx + sy @ sy + sz @ sz).toarray()
    dev = np.abs(casimir - s * (s + 1) * np.eye(b.dim)).max()
    reports.append(_deviation_report("basis.casimir", "deviation of S^2 from s(s+1)I", 0.0, dev, "closed-form"))
    bb = make_basis(1, 6)
    d = boson_operator(bb, "annihilate").matrix
    comm = (d @ d.T.conj() - d.T.conj() @ d).toarray()
    below = 6 * 2  # Fock levels n < M, each a block of N+1 = 2
    sub = comm[:below, :below]
    dev = np.abs(sub - np.eye(below)).max()
    reports.append(_deviation_report("basis.boson_commutator", "deviation of [d,d'] from I below cutoff", 0.0, dev, "closed-form"))
    b2 = make_basis(2, 0)
    val = spin_operator(b2, "plus").matrix[2, 1]
    reports.append(_deviation_report("basis.ladder_root2", "S+ matrix element <1,1|S+|1,0>", math.sqrt(2), val.real, "closed-form"))
    return reports


def _hamiltonian_cases():
    reports = []
    b = make_basis(4, 6)
    h = build_hamiltonian(b, ModelParams(1.0, 0.0, 0.0))
    gs = ground_state(h, parity_diag=parity_diagonal(b))
    reports.append(_deviation_report("hamiltonian.decoupled_ground", "decoupled ground energy", -2.0, gs.energy, "closed-form"))

    href = dense_hamiltonian_reference(2, 2, 1.0, 0.5, 0.5)
    e_ref = float(np.linalg.eigvalsh(href)[0])
    b9 = make_basis(2, 2)
    gs9 = ground_state(build_hamiltonian(b9, ModelParams(1.0, 0.5, 0.5)), parity_diag=parity_diagonal(b9))
    reports.append(_deviation_report("hamiltonian.dense_9x9", "9x9 ground energy", e_ref, gs9.energy, "dense-diagonalization"))

    b6 = make_basis(6, 6)
    pi_op = parity_operator(b6).matrix
    h6 = build_hamiltonian(b6, ModelParams(1.0, 0.7, 0.9)).matrix
    dev = abs(h6 @ pi_op - pi_op @ h6).max()
    reports.append(_deviation_report("hamiltonian.parity_commutator", "deviation of [H,Pi] from 0", 0.0, dev, "closed-form"))

    h1 = build_hamiltonian(b6, ModelParams(1.0, 0.9, 0.4)).matrix
    h2 = build_hamiltonian(b6, ModelParams(1.0, 0.3, 0.4)).matrix
    coup = build_time_dependent(b6, ModelParams(1.0, 0.3, 0.4), QuenchProfile(0.3))[1].matrix
    dev = abs((h1 - h2) - 0.6 * coup).max()
    reports.append(_deviation_report("hamiltonian.linearity", "deviation of H(l1)-H(l2) from (l1-l2)Hc", 0.0, dev, "closed-form"))

    prof = QuenchProfile(lambda0=0.45, delta_lambda=0.2, timescale=7.0)
    rest, coupling, schedule = build_time_dependent(b6, ModelParams(1.0, 0.45, 0.4), prof)
    t = 3.7
    recon = rest.matrix + schedule(t) * coupling.matrix
    direct = build_hamiltonian(b6, ModelParams(1.0, schedule(t), 0.4)).matrix
    dev = abs(recon - direct).max()
    reports.append(_deviation_report("hamiltonian.reconstruction", "deviation of reassembled H(t) from direct assembly", 0.0, dev, "closed-form"))
    return reports


def _solver_cases():
    reports = []
    b = make_basis(5, 4)
    gs = ground_state(build_hamiltonian(b, ModelParams(1.0, 0.0, 0.0)), parity_diag=parity_diagonal(b))
    reports.append(_deviation_report("solver.decoupled_gap", "decoupled gap", 1.0, gs.gap, "closed-form"))

    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(8):
        n = int(rng.integers(2, 9))
        m = int(rng.integers(2, 9))
        eps = float(rng.uniform(0.5, 1.5))
        lam = float(rng.uniform(0.0, 1.0))
        j = float(rng.uniform(0.0, 1.0))
        bb = make_basis(n, m)
        h = build_hamiltonian(bb, ModelParams(eps, lam, j))
        it = ground_state(h, parity_diag=parity_diagonal(bb))
        ref = dense_spectrum_oracle(h, 1)[0][0]
        worst = max(worst, abs(it.energy - ref))
    reports.append(_deviation_report("solver.dense_agreement", "worst |E0_lanczos - E0_dense| over 8 random points", 0.0, worst, "dense-diagonalization"))

    b12 = make_basis(12, 12)
    h12 = build_hamiltonian(b12, ModelParams(1.0, 0.9, 0.2))
    plain = ground_state(h12, parity_diag=parity_diagonal(b12))
    even = ground_state_even_parity(h12, parity_operator(b12))
    reports.append(_deviation_report("solver.projected_energy", "even-sector vs global ground energy", plain.energy, even.energy, "dense-diagonalization"))

    prof = QuenchProfile(lambda0=0.45, delta_lambda=0.08, timescale=3.0)
    gs0, psi_ref = dense_propagator_oracle(4, 4, 1.0, 0.6, prof, t_final=10.0, dt=5e-5)
    parts = build_time_dependent(make_basis(4, 4), ModelParams(1.0, 0.45, 0.6), prof)
    traj = evolve(parts, gs0.state, EvolutionConfig(t_final=10.0, dt=0.005, record_stride=2000))
    fid = abs(np.vdot(psi_ref, traj.states[-1])) ** 2
    reports.append(_deviation_report("solver.quench_fidelity", "1 - fidelity vs dense propagator", 0.0, 1.0 - fid, "dense-propagator"))

    series = run_quench(6, 6, 0.5, QuenchProfile(lambda0=0.4, delta_lambda=0.0), t_final=5.0, dt=0.005, record_stride=100)
    dev = float(np.abs(series.gain - 1.0).max())
    reports.append(_deviation_report("solver.stationary_gain", "max |g(t) - 1| for dlambda = 0", 0.0, dev, "closed-form"))
    return reports


def _observables_cases():
    reports = []
    b = make_basis(2, 40)
    alpha2 = 5.0
    n = np.arange(41)
    from scipy.special import gammaln

    coeff = np.exp(-alpha2 / 2.0 + 0.5 * n * math.log(alpha2) - 0.5 * gammaln(n + 1.0))
    psi = np.zeros(b.dim, dtype=complex)
    # spin all-down (m_index 0), boson coherent: flat = nb*(N+1) + 0
    psi[n * (b.n_spins + 1)] = coeff
    psi /= np.linalg.norm(psi)
    obs = measure(psi, b)
    reports.append(_deviation_report("observables.coherent_sqnr", "SQNR of |alpha|^2 = 5 coherent state", 5.0, sqnr(obs.n_mean, obs.n_var), "closed-form"))

    rng = np.random.default_rng(3)
    bb = make_basis(9, 5)
    worst = 0.0
    for _ in range(4):
        v = rng.normal(size=bb.dim) + 1j * rng.normal(size=bb.dim)
        v /= np.linalg.norm(v)
        o = measure(v, bb)
        sz = spin_operator(bb, "z").matrix
        sz2 = float(np.vdot(sz @ v, sz @ v).real) / bb.n_spins**2
        s = bb.spin
        worst = max(worst, abs(o.zeta_Mx + o.zeta_My + sz2 - s * (s + 1) / bb.n_spins**2))
    reports.append(_deviation_report("observables.sum_rule", "deviation of zeta_Mx+zeta_My+<Sz^2>/N^2 from s(s+1)/N^2", 0.0, worst, "closed-form"))

    b40 = make_basis(40, 60)
    gs = ground_state(build_hamiltonian(b40, ModelParams(1.0, 0.8, 0.0)), parity_diag=parity_diagonal(b40))
    zf = measure(gs.state, b40).zeta_S
    reports.append(_deviation_report("observables.fs_meanfield_zeta", "FS zeta_S vs mean-field 0.54234375 (N=40)", 0.54234375, zf, "closed-form"))

    b40b = make_basis(40, 12)
    gs = ground_state(build_hamiltonian(b40b, ModelParams(1.0, 0.3, 1.0)), parity_diag=parity_diagonal(b40b))
    zy = measure(gs.state, b40b).zeta_My
    reports.append(_deviation_report("observables.fn_meanfield_zeta", "FN zeta_My vs mean-field 0.1875 (N=40)", 0.1875, zy, "closed-form"))
    return reports


def _meanfield_cases():
    reports = []
    reports.append(_deviation_report("meanfield.pn_energy", "PN energy per spin", -0.5, minimize(ModelParams(1.0, 0.3, 0.3)).energy_per_spin, "closed-form"))
    reports.append(_deviation_report("meanfield.fs_energy", "FS energy per spin at lambda=0.8", -0.8**2 - 1.0 / (16 * 0.8**2), minimize(ModelParams(1.0, 0.8, 0.0)).energy_per_spin, "closed-form"))
    reports.append(_deviation_report("meanfield.fn_energy", "FN energy per spin at J=1", -0.625, minimize(ModelParams(1.0, 0.2, 1.0)).energy_per_spin, "closed-form"))

    worst = 0.0
    for lam in (0.6, 0.8, 1.0):
        lo, hi = 1.2 * lam**2, 2.8 * lam**2
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            theta_fs = math.acos(max(-1.0, -1.0 / (4 * lam**2)))
            e_fs = energy_per_spin(ModelParams(1.0, lam, mid), -lam * math.sin(theta_fs), theta_fs, 0.0)
            ct = max(-1.0, -1.0 / (2 * mid))
            e_fn = energy_per_spin(ModelParams(1.0, lam, mid), 0.0, math.acos(ct), math.pi / 2)
            if e_fn > e_fs:  # FS still favored below the crossing
                lo = mid
            else:
                hi = mid
        worst = max(worst, abs(0.5 * (lo + hi) - 2 * lam**2))
    reports.append(_deviation_report("meanfield.crossing", "worst |J_cross - 2 lambda^2| over lambda in {0.6, 0.8, 1.0}", 0.0, worst, "closed-form"))

    sol = minimize(ModelParams(1.0, 0.9, 0.3))
    dev = abs(sol.alpha - (-0.9 * math.sin(sol.theta) * math.cos(sol.phi)))
    reports.append(_deviation_report("meanfield.stationarity", "deviation of alpha from -lambda sin(theta) cos(phi)", 0.0, dev, "closed-form"))
    return reports


def _criticality_cases():
    reports = []
    ns = np.array([20, 30, 40, 50, 60, 70, 80], dtype=float)
    ys = 0.067 * ns**2 - 1.881 * ns + 22.62
    fit = fit_scaling(list(zip(ns, ys)), "quadratic")
    dev = max(abs(fit.coefficients[0] - 0.067), abs(fit.coefficients[1] + 1.881), abs(fit.coefficients[2] - 22.62))
    reports.append(_deviation_report("criticality.fit_roundtrip", "worst coefficient error on exact quadratic", 0.0, dev, "closed-form"))

    fit2 = fit_scaling(list(zip(ns, 3.0 * ns + 1.0)), "quadratic")
    reports.append(_deviation_report("criticality.linear_under_quadratic", "quadratic coefficient on exact linear data", 0.0, fit2.coefficients[0], "closed-form"))

    reports.append(_deviation_report("criticality.estimation_error", "delta_lambda for chi=300.94, dI=0.375", 0.375 / 300.94, estimation_error(300.94, 0.375), "closed-form"))

    b = make_basis(8, 8)
    scan = chi_scan(b, ModelParams(1.0, 0.0, 0.2), np.linspace(0.05, 0.15, 3))
    reports.append(_deviation_report("criticality.pn_flat", "max |chi| deep in the normal phase", 0.0, float(np.abs(scan.chi).max()), "closed-form"))

    b10 = make_basis(10, 10)
    grid = np.linspace(0.60, 0.70, 5)
    scan_fast = chi_scan(b10, ModelParams(1.0, 0.0, 0.9), grid)
    chi_dense = []
    for lam in grid:
        vals = []
        for sgn in (+0.5, -0.5):
            h = dense_hamiltonian_reference(10, 10, 1.0, lam + sgn * scan_fast.fd_step, 0.9)
            w, v = np.linalg.eigh(h)
            nb = make_basis(10, 10).boson_occupancy()
            vals.append(float(nb @ (np.abs(v[:, 0]) ** 2)))
        chi_dense.append((vals[0] - vals[1]) / scan_fast.fd_step / 10)
    dev = float(np.abs(scan_fast.chi - np.array(chi_dense)).max())
    reports.append(_deviation_report("criticality.dense_scan_agreement", "max |chi_scan - dense oracle scan|", 0.0, dev, "dense-diagonalization"))
    return reports


def _husimi_cases():
    reports = []
    worst = 0.0
    for n in (2, 4, 6):
        bb = make_basis(n, 0)
        sx = spin_operator(bb, "x").matrix.toarray()
        sy = spin_operator(bb, "y").matrix.toarray()
        for theta, phi in ((0.8, 0.6), (2.4, 3.9), (1.3, 5.1)):
            rot = sla.expm(1j * theta * (sx * math.sin(phi) - sy * math.cos(phi)))
            worst = max(worst, float(np.abs(rot[:, -1] - coherent_spin_amplitudes(n, theta, phi)).max()))
    reports.append(_deviation_report("husimi.rotation_convention", "worst overlap-coefficient deviation from matrix exponential", 0.0, worst, "dense-diagonalization"))

    b = make_basis(2, 10)
    psi = np.zeros(b.dim, dtype=complex)
    psi[0] = 1.0
    q = boson_q(psi, b)
    i0 = int(np.argmin(np.abs(q.axes[0])))
    j0 = int(np.argmin(np.abs(q.axes[1])))
    reports.append(_deviation_report("husimi.vacuum_q", "Q(0) of the vacuum", 1.0 / math.pi, q.values[i0, j0], "closed-form"))
    reports.append(_deviation_report("husimi.boson_normalization", "vacuum Q integral", 1.0, q.normalization(), "closed-form"))

    b12 = make_basis(12, 12)
    gs = ground_state_even_parity(build_hamiltonian(b12, ModelParams(1.0, 0.58, 0.6)), parity_operator(b12))
    sq = spin_q(gs.state, b12)
    reports.append(_deviation_report("husimi.spin_normalization", "FS spin-Q integral", 1.0, sq.normalization(), "closed-form"))

    qf = boson_q(gs.state, b12)
    dev = float(np.abs(qf.values - qf.values[::-1, ::-1]).max())
    reports.append(_deviation_report("husimi.parity_symmetry", "max |Q(alpha) - Q(-alpha)| for an even-parity state", 0.0, dev, "closed-form"))
    return reports


_SCOPES = {
    "basis": _basis_cases,
    "hamiltonian": _hamiltonian_cases,
    "solver": _solver_cases,
    "observables": _observables_cases,
    "meanfield": _meanfield_cases,
    "criticality": _criticality_cases,
    "husimi": _husimi_cases,
}


def run_oracle_suite(scope: str = "all"):
    """Execute the oracle cases; failures are collected, never raised."""
    if scope == "all":
        names = list(_SCOPES)
    elif scope in _SCOPES:
        names = [scope]
    else:
        raise ValueError(f"scope must be 'all' or one of {sorted(_SCOPES)}, got {scope!r}")
    reports = []
    for name in names:
        reports.extend(_SCOPES[name]())
    return reports


# -- scaled-down figure recipes ------------------------------------------

def _steepest_rise(lambdas, zetas):
    d = np.diff(zetas) / np.diff(lambdas)
    k = int(np.argmax(d))
    return 0.5 * (lambdas[k] + lambdas[k + 1])


def _zeta_slice(n, j, grid, epsilon=1.0):
    b = make_basis(n, n)
    out = []
    for lam in grid:
        gs = ground_state(build_hamiltonian(b, ModelParams(epsilon, float(lam), j)), parity_diag=parity_diagonal(b))
        out.append(measure(gs.state, b).zeta_S)
    return np.array(out)


def figure_regression(figure_id: str):
    """Scaled-down recipe for one published figure, with its assertions."""
    if figure_id == "fig2":
        n = 16
        # second-order lines have no interior slope maximum at finite N;
        # the threshold crossover is the stable locator there
        knee = locate_crossover(n, n, 0.2)
        grid1 = np.linspace(0.60, 0.74, 29)
        rise1 = _steepest_rise(grid1, _zeta_slice(n, 1.0, grid1))
        shift = 0.49 / n
        return [
            _deviation_report("fig2.second_order_lambda", "zeta_S crossover at J=0.2 (N=16)", 0.5, knee, "paper-figure"),
            _deviation_report("fig2.first_order_lambda", "steepest zeta_S rise at J=1 vs sqrt(J/2) - 0.49/N", math.sqrt(0.5) - shift, rise1, "paper-figure"),
        ]
    if figure_id == "fig3":
        lam_star = locate_crossover(24, 24, 1.0)
        r1 = _deviation_report("fig3.jump_location", "50% crossover at N=24 vs sqrt(1/2) - 0.49/N", math.sqrt(0.5) - 0.49 / 24, lam_star, "paper-figure")
        scans = {}
        for n in (12, 24):
            b = make_basis(n, n)
            scans[n] = chi_max_search(b, ModelParams(1.0, 0.0, 1.0), (math.sqrt(0.5) - 0.06, math.sqrt(0.5) + 0.02), coarse_steps=25, refine_steps=15)
        r2 = _bool_report("fig3.chi_growth", f"chi_max grows from N=12 ({scans[12].chi_max:.2f}) to N=24 ({scans[24].chi_max:.2f})", scans[24].chi_max > 1.5 * scans[12].chi_max, "paper-figure")
        return [r1, r2]
    if figure_id == "fig4":
        n = 24
        lam_star = locate_crossover(n, n, 1.0)
        gains = {}
        for offset in (-0.05, -0.005, 0.05):
            prof = QuenchProfile(lambda0=lam_star + offset, delta_lambda=0.01, timescale=10.0)
            series = run_quench(n, n, 1.0, prof, t_final=40.0, dt=0.005, record_stride=100)
            gains[offset] = float(series.gain[series.at_time(40.0)])
        best = max(gains, key=gains.get)
        r1 = _bool_report("fig4.localization", f"gain at t=40 peaks at the near-critical bias (offsets tried: {sorted(gains)})", best == -0.005, "paper-figure")
        r2 = _bool_report("fig4.contrast", f"near-critical gain {gains[-0.005]:.2f} >= 2x detuned {gains[-0.05]:.2f}/{gains[0.05]:.2f}", gains[-0.005] >= 2.0 * max(gains[-0.05], gains[0.05]), "paper-figure")
        return [r1, r2]
    if figure_id == "fig5":
        n_list = (12, 16, 20, 24)
        rows = slope_vs_j([0.2, 1.0], list(n_list), QuenchSetup(t_final=40.0, record_stride=40))
        by_j = {r.j_coupling: r for r in rows}
        r1 = _bool_report("fig5.linearity", f"g_max vs N at J=1 fits linearly (r^2 = {by_j[1.0].r_squared:.4f})", by_j[1.0].r_squared >= 0.9, "paper-figure")
        r2 = _bool_report("fig5.slope_ratio", f"slope(J=1) = {by_j[1.0].slope:.4f} >= 3x slope(J=0.2) = {by_j[0.2].slope:.4f}", by_j[1.0].slope >= 3.0 * by_j[0.2].slope, "paper-figure")
        return [r1, r2]
    if figure_id == "figS1":
        b = make_basis(12, 12)
        gs_pn = ground_state_even_parity(build_hamiltonian(b, ModelParams(1.0, 0.2, 0.2)), parity_operator(b))
        peaks_pn = local_maxima(boson_q(gs_pn.state, b), rel_threshold=1e-2)
        gs_fs = ground_state_even_parity(build_hamiltonian(b, ModelParams(1.0, 0.58, 0.6)), parity_operator(b))
        edge = math.sqrt(12) + 1.6
        ax = np.linspace(-edge, edge, 201)
        peaks_fs = local_maxima(boson_q(gs_fs.state, b, re_axis=ax, im_axis=ax), rel_threshold=1e-2)
        r1 = _bool_report("figS1.pn_peaks", f"PN boson Q has exactly one peak at the origin (found {len(peaks_pn)})", len(peaks_pn) == 1 and abs(peaks_pn[0][0]) < 0.05 and abs(peaks_pn[0][1]) < 0.05, "paper-figure")
        sym = len(peaks_fs) == 2 and abs(peaks_fs[0][0] + peaks_fs[1][0]) < 0.06 and max(abs(peaks_fs[0][1]), abs(peaks_fs[1][1])) < 0.06
        r2 = _bool_report("figS1.fs_peaks", f"FS boson Q has two peaks mirrored across the imaginary axis (found {len(peaks_fs)})", sym, "paper-figure")
        return [r1, r2]
    if figure_id == "figS2":
        b = make_basis(12, 12)
        j = 2.0
        gs = ground_state_even_parity(build_hamiltonian(b, ModelParams(1.0, 0.2, j)), parity_operator(b))
        sq = spin_q(gs.state, b)
        lobes = [p for p in local_maxima(sq, rel_threshold=5e-2) if 0.02 < p[0] < math.pi - 0.02]
        ct_ref = -1.0 / (2 * j)
        dev = max(abs(math.cos(t) - ct_ref) for t, _, _ in lobes[:2]) if len(lobes) >= 2 else math.inf
        return [_deviation_report("figS2.fn_lobes", "FN spin-Q lobe cos(theta) vs -eps/(2J)", ct_ref, ct_ref + dev, "paper-figure")]
    raise ValueError(f"unknown figure id {figure_id!r}")
