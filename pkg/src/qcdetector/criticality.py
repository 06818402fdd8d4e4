"""Sensitivity scans, finite-size scaling fits, and quench gain tables.

The sensitivity function

    chi(lambda) = (1/N) d<d'd>/dlambda

is evaluated on the ground state by central differences; its maximum
diverges like N^2 at the first-order critical point lambda_cI = sqrt(J/2).
Quench runs feed the dynamical counterparts: maximum gain g_max and the
signal-to-quantum-noise ratio, whose maxima scale linearly with N, with a
slope that itself jumps when J crosses the triple point.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .basis import make_basis, parity_diagonal
from .hamiltonian import ModelParams, QuenchProfile, build_hamiltonian, build_time_dependent
from .meanfield import PhaseBoundaries
from .observables import GAIN_FLOOR, SQNR_FLOOR, gain as _gain, sqnr as _sqnr
from .solver import EvolutionConfig, evolve, ground_state

DEFAULT_FD_STEP = 1e-3


@dataclass(frozen=True)
class ChiScan:
    """chi(lambda) on a grid, with the order-parameter column it came from.

    ``zeta_S`` holds the mean of the two finite-difference evaluations per
    grid point, i.e. <n>/N at lambda up to O(fd_step^2).  Points whose
    ground-state solves did not converge are flagged and excluded from the
    maximum.
    """

    lambdas: np.ndarray
    zeta_S: np.ndarray
    chi: np.ndarray
    chi_max: float
    lambda_at_max: float
    fd_step: float
    converged: np.ndarray

    def n_points(self) -> int:
        return self.lambdas.shape[0]


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares polynomial fit of a measured quantity against N."""

    xs: np.ndarray
    ys: np.ndarray
    model: str
    coefficients: tuple
    r_squared: float

    def predict(self, x):
        return np.polyval(self.coefficients, x)


@dataclass(frozen=True)
class QuenchSetup:
    """Shared configuration of the amplification runs.

    The ramp is biased to straddle the critical coupling.  In ``tracked``
    mode (the default for scaling studies) the finite-size crossover is
    located per (J, N) by bisection and lambda0 = lambda* + bias_offset;
    the crossover location drifts like lambda_c - O(1/N), so a fixed
    asymptotic bias would park small systems on the wrong side.  In
    ``fixed`` mode lambda0 = lambda_c(J) + bias_offset directly.
    """

    epsilon: float = 1.0
    dlambda: float = 0.01
    envelope: str = "tanh_ramp"
    timescale: float = 10.0
    bias_offset: float = None
    bias_mode: str = "tracked"
    t_final: float = 60.0
    dt: float = 0.005
    record_stride: int = 20
    method: str = "rk4"
    cutoff_ratio: float = 1.0
    table: tuple = field(default=None, repr=False)

    def bias(self, j: float, n_spins: int = None, cutoff: int = None, tol: float = 1e-9) -> float:
        offset = -0.5 * self.dlambda if self.bias_offset is None else self.bias_offset
        if self.bias_mode == "tracked" and n_spins is not None:
            cutoff = cutoff or n_spins
            lam_star = locate_crossover(n_spins, cutoff, j, self.epsilon, self.dlambda, tol=tol)
            return lam_star + offset
        return PhaseBoundaries(self.epsilon).critical_lambda(j) + offset

    def profile(self, lambda0: float) -> QuenchProfile:
        return QuenchProfile(
            lambda0=lambda0,
            delta_lambda=self.dlambda,
            envelope=self.envelope,
            timescale=self.timescale,
            table=self.table,
        )


def locate_crossover(
    n_spins: int,
    fock_cutoff: int,
    j_coupling: float,
    epsilon: float = 1.0,
    dlambda: float = 0.01,
    window: float = 0.08,
    iterations: int = 11,
    tol: float = 1e-9,
) -> float:
    """Finite-size transition coupling by bisection on zeta_S.

    The target level is half the mean-field superradiant value just past
    the asymptotic critical point, so the same rule covers the first-order
    jump (J > eps/2) and the second-order knee (J <= eps/2).
    """
    from .meanfield import minimize

    lam_c = PhaseBoundaries(epsilon).critical_lambda(j_coupling)
    ref = minimize(ModelParams(epsilon, lam_c + dlambda, j_coupling))
    target = 0.5 * abs(ref.alpha) ** 2
    target = max(target, 1e-3)
    lo, hi = max(lam_c - window, 0.5 * dlambda), lam_c + 0.02
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        n_mean, _ = _ground_n_mean(n_spins, fock_cutoff, epsilon, mid, j_coupling, 1.0, tol)
        if n_mean / n_spins < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class TimeSeries:
    """Records of one quench run on the sampled time grid."""

    times: np.ndarray
    lambda_t: np.ndarray
    n_mean: np.ndarray
    gain: np.ndarray
    sqnr: np.ndarray
    envelope: np.ndarray
    norm_drift: np.ndarray
    n_spins: int
    fock_cutoff: int
    flags: tuple = ()

    def peak_gain(self) -> tuple:
        """(g_max, time of max, SQNR at the same sample)."""
        k = int(np.nanargmax(self.gain))
        return float(self.gain[k]), float(self.times[k]), float(self.sqnr[k])

    def at_time(self, t: float) -> int:
        """Index of the recorded sample closest to t."""
        return int(np.argmin(np.abs(self.times - t)))


@dataclass(frozen=True)
class SlopeRow:
    """Linear g_max-vs-N fit at one spin-spin coupling."""

    j_coupling: float
    n_list: tuple
    g_max: tuple
    sqnr_at_peak: tuple
    slope: float
    intercept: float
    r_squared: float
    flagged: bool


def _ground_n_mean(n_spins, fock_cutoff, epsilon, lam, j_coupling, omega0, tol):
    basis = make_basis(n_spins, fock_cutoff)
    h = build_hamiltonian(basis, ModelParams(epsilon, lam, j_coupling, omega0))
    gs = ground_state(h, tol=tol, parity_diag=parity_diagonal(basis))
    prob = np.abs(gs.state.amplitudes) ** 2
    n_mean = float(basis.boson_occupancy() @ prob)
    return n_mean, gs.converged


def _chi_point(args):
    n_spins, fock_cutoff, epsilon, j_coupling, omega0, lam, fd, tol = args
    n_plus, ok_p = _ground_n_mean(n_spins, fock_cutoff, epsilon, lam + 0.5 * fd, j_coupling, omega0, tol)
    n_minus, ok_m = _ground_n_mean(n_spins, fock_cutoff, epsilon, lam - 0.5 * fd, j_coupling, omega0, tol)
    return n_plus, n_minus, ok_p and ok_m


def chi_scan(
    basis,
    params: ModelParams,
    lambda_grid,
    fd_step: float = DEFAULT_FD_STEP,
    tol: float = 1e-9,
    jobs: int = 1,
) -> ChiScan:
    """Central-difference sensitivity on a coupling grid.

    Each grid point costs two ground-state solves at lambda +- fd_step/2;
    points are independent and distribute over ``jobs`` processes with a
    deterministic grid-ordered reduce.
    """
    grid = np.asarray(lambda_grid, dtype=float)
    if fd_step <= 0:
        raise ValueError(f"fd_step must be > 0, got {fd_step}")
    if np.any(grid - 0.5 * fd_step < 0):
        raise ValueError("lambda grid extends below 0 at the difference stencil")
    tasks = [
        (basis.n_spins, basis.fock_cutoff, params.epsilon, params.j_coupling, params.omega0, lam, fd_step, tol)
        for lam in grid
    ]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_chi_point, tasks, chunksize=1))
    else:
        results = [_chi_point(t) for t in tasks]
    n = basis.n_spins
    chi = np.array([(p - m) / fd_step / n for p, m, _ in results])
    zeta = np.array([(p + m) / 2.0 / n for p, m, _ in results])
    converged = np.array([ok for _, _, ok in results], dtype=bool)
    if converged.any():
        masked = np.where(converged, chi, -np.inf)
        k = int(np.argmax(masked))
        chi_max, lam_max = float(chi[k]), float(grid[k])
    else:
        chi_max, lam_max = float("nan"), float("nan")
    return ChiScan(
        lambdas=grid,
        zeta_S=zeta,
        chi=chi,
        chi_max=chi_max,
        lambda_at_max=lam_max,
        fd_step=fd_step,
        converged=converged,
    )


def chi_max_search(
    basis,
    params: ModelParams,
    window: tuple,
    coarse_steps: int = 41,
    refine_steps: int = 21,
    fd_step: float = 2e-4,
    tol: float = 1e-9,
    jobs: int = 1,
) -> ChiScan:
    """Two-stage scan: coarse over ``window``, then refined around the peak.

    The finite-size peak narrows like 1/N^2, so the refinement (spanning
    two coarse spacings around the coarse argmax) is what actually resolves
    chi_max at large N.  Returns the merged scan over both grids.
    """
    lo, hi = window
    coarse = chi_scan(basis, params, np.linspace(lo, hi, coarse_steps), fd_step, tol, jobs)
    spacing = (hi - lo) / (coarse_steps - 1)
    center = coarse.lambda_at_max
    fine_lo = max(lo, center - 2.0 * spacing)
    fine_hi = min(hi, center + 2.0 * spacing)
    fine = chi_scan(basis, params, np.linspace(fine_lo, fine_hi, refine_steps), fd_step, tol, jobs)
    lam = np.concatenate([coarse.lambdas, fine.lambdas])
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    zeta = np.concatenate([coarse.zeta_S, fine.zeta_S])[order]
    chi = np.concatenate([coarse.chi, fine.chi])[order]
    conv = np.concatenate([coarse.converged, fine.converged])[order]
    keep = np.concatenate([[True], np.diff(lam) > 1e-12])
    lam, zeta, chi, conv = lam[keep], zeta[keep], chi[keep], conv[keep]
    masked = np.where(conv, chi, -np.inf)
    k = int(np.argmax(masked))
    return ChiScan(
        lambdas=lam,
        zeta_S=zeta,
        chi=chi,
        chi_max=float(chi[k]),
        lambda_at_max=float(lam[k]),
        fd_step=fd_step,
        converged=conv,
    )


def fit_scaling(points, model: str) -> ScalingFit:
    """Least-squares fit of (N, value) pairs to a linear or quadratic law."""
    pts = sorted(points)
    xs = np.array([p[0] for p in pts], dtype=float)
    ys = np.array([p[1] for p in pts], dtype=float)
    if np.any(np.diff(xs) <= 0):
        raise ValueError("spin numbers must be strictly increasing")
    if model == "quadratic":
        degree, minimum = 2, 4
    elif model == "linear":
        degree, minimum = 1, 3
    else:
        raise ValueError(f"model must be 'linear' or 'quadratic', got {model!r}")
    if xs.size < minimum:
        raise ValueError(f"{model} fit needs >= {minimum} points, got {xs.size}")
    coeffs = np.polyfit(xs, ys, degree)
    resid = ys - np.polyval(coeffs, xs)
    ss_res = float(resid @ resid)
    ss_tot = float(((ys - ys.mean()) ** 2).sum())
    if ss_tot < 1e-300:
        r2 = 1.0 if ss_res < 1e-300 else 0.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    return ScalingFit(xs=xs, ys=ys, model=model, coefficients=tuple(coeffs), r_squared=r2)


def run_quench(
    n_spins: int,
    fock_cutoff: int,
    j_coupling: float,
    profile: QuenchProfile,
    epsilon: float = 1.0,
    omega0: float = 1.0,
    t_final: float = 60.0,
    dt: float = 0.005,
    record_stride: int = 20,
    method: str = "rk4",
    tol: float = 1e-9,
) -> TimeSeries:
    """Ground state of H(0), then propagation under the ramped coupling."""
    basis = make_basis(n_spins, fock_cutoff)
    params = ModelParams(epsilon, profile.lambda0, j_coupling, omega0)
    h0 = build_hamiltonian(basis, params)
    gs = ground_state(h0, tol=tol, parity_diag=parity_diagonal(basis))
    parts = build_time_dependent(basis, params, profile)
    cfg = EvolutionConfig(t_final=t_final, dt=dt, method=method, record_stride=record_stride)
    traj = evolve(parts, gs.state, cfg)

    n_diag = basis.boson_occupancy().astype(float)
    prob = np.abs(traj.states) ** 2
    n_mean = prob @ n_diag
    n_sq = prob @ n_diag**2
    n_var = n_sq - n_mean**2
    n0 = float(n_mean[0])

    flags = []
    if not gs.converged:
        flags.append("ground_state_unconverged")
    if n0 <= GAIN_FLOOR:
        flags.append("gain_degenerate")
        gains = np.full_like(n_mean, np.nan)
    else:
        gains = n_mean / n0
    with np.errstate(divide="ignore", invalid="ignore"):
        sqnrs = np.where(n_var > SQNR_FLOOR, n_mean**2 / np.maximum(n_var, SQNR_FLOOR), np.inf)
    if np.any(n_var <= SQNR_FLOOR):
        flags.append("sqnr_degenerate")
    fock_top = prob[:, -2 * (n_spins + 1):].sum(axis=1).max()
    if fock_top > 1e-6:
        flags.append("fock_cutoff_pressure")

    return TimeSeries(
        times=traj.times,
        lambda_t=np.array([parts[2](t) for t in traj.times]),
        n_mean=n_mean,
        gain=gains,
        sqnr=sqnrs,
        envelope=np.asarray(profile.envelope_at(traj.times)),
        norm_drift=traj.norms - 1.0,
        n_spins=n_spins,
        fock_cutoff=fock_cutoff,
        flags=tuple(flags),
    )


def _gain_point(args):
    n_spins, cutoff, j, setup_fields = args
    setup = QuenchSetup(**setup_fields)
    series = run_quench(
        n_spins,
        cutoff,
        j,
        setup.profile(setup.bias(j, n_spins, cutoff)),
        epsilon=setup.epsilon,
        t_final=setup.t_final,
        dt=setup.dt,
        record_stride=setup.record_stride,
        method=setup.method,
    )
    g_max, _, sqnr_pk = series.peak_gain()
    return g_max, sqnr_pk, series.flags


def gain_scaling_table(j_coupling, n_list, setup: QuenchSetup, jobs: int = 1):
    """g_max and SQNR-at-peak across spin numbers at one coupling."""
    from dataclasses import asdict

    tasks = [
        (n, int(round(setup.cutoff_ratio * n)), j_coupling, asdict(setup))
        for n in n_list
    ]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_gain_point, tasks, chunksize=1))
    else:
        results = [_gain_point(t) for t in tasks]
    return results


def slope_vs_j(j_grid, n_list, setup: QuenchSetup = None, jobs: int = 1, r2_gate: float = 0.95):
    """Slope of g_max vs N for each J, with an r^2 quality gate.

    Rows whose linear fit falls below the gate carry ``flagged=True`` but
    are still reported with their data.
    """
    setup = setup or QuenchSetup()
    rows = []
    for j in j_grid:
        results = gain_scaling_table(j, n_list, setup, jobs=jobs)
        gains = tuple(r[0] for r in results)
        sqnrs = tuple(r[1] for r in results)
        fit = fit_scaling(list(zip(n_list, gains)), "linear")
        rows.append(
            SlopeRow(
                j_coupling=float(j),
                n_list=tuple(n_list),
                g_max=gains,
                sqnr_at_peak=sqnrs,
                slope=float(fit.coefficients[0]),
                intercept=float(fit.coefficients[1]),
                r_squared=fit.r_squared,
                flagged=fit.r_squared < r2_gate,
            )
        )
    return rows


def estimation_error(chi_at_critical: float, delta_I: float) -> float:
    """Coupling uncertainty from the rising-window relation.

    The order-parameter jump delta_I divided by the sensitivity at the
    critical point bounds how finely the coupling can be resolved:
    delta_lambda = delta_I / chi(lambda_c).
    """
    if chi_at_critical <= 0:
        raise ValueError(f"sensitivity must be positive, got {chi_at_critical}")
    return delta_I / chi_at_critical
