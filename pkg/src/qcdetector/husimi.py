"""Husimi quasi-probability distributions of a pure state.

Boson mode:

    Q(alpha) = (1/pi) sum_m | sum_n <alpha|n> psi(n, m) |^2,
    <n|alpha> = exp(-|alpha|^2 / 2) alpha^n / sqrt(n!).

Collective spin, with the coherent state defined through the rotation
|theta, phi> = exp{i theta (S_x sin phi - S_y cos phi)} |s, s>, s = N/2:

    Q(theta, phi) = ((2s+1)/4pi) sum_n | sum_m <theta,phi|s,m> psi(n, m) |^2,
    <s,m|theta,phi> = sqrt(C(2s, s+m)) cos^(s+m)(theta/2)
                      sin^(s-m)(theta/2) exp(i (s-m) phi).

The spin prefactor (2s+1)/4pi makes the sphere integral of Q equal one;
the closed-form overlap phase is pinned by the matrix exponential of the
stated generator (see the rotation oracle in the tests).  Factorials and
binomials are evaluated in the log domain, so large N and |alpha| are safe
from overflow.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .basis import BasisSpec
from .solver import StateVector

DEFAULT_BOSON_POINTS = 201
DEFAULT_THETA_POINTS = 181
DEFAULT_PHI_POINTS = 360


@dataclass(frozen=True)
class QFunctionGrid:
    """Q values on a rectangular grid.

    For ``kind='boson'`` the axes are (Re alpha, Im alpha) and
    ``values[i, j] = Q(re[i] + 1j im[j])``.  For ``kind='spin'`` the axes
    are (theta, phi) and ``values[i, j] = Q(theta[i], phi[j])``.
    """

    kind: str
    axes: tuple
    values: np.ndarray
    prefactor_included: bool
    n_spins: int
    fock_cutoff: int
    warning: str = None
    metadata: dict = field(default_factory=dict)

    def normalization(self) -> float:
        """Grid integral of Q (d^2 alpha, or sin(theta) dtheta dphi)."""
        a0, a1 = self.axes
        if self.kind == "boson":
            inner = np.trapezoid(self.values, x=a1, axis=1)
            return float(np.trapezoid(inner, x=a0))
        weighted = self.values * np.sin(a0)[:, None]
        dphi = 2.0 * math.pi / a1.size
        inner = weighted.sum(axis=1) * dphi
        return float(np.trapezoid(inner, x=a0))


def _amplitude_matrix(state, basis: BasisSpec) -> np.ndarray:
    psi = state.amplitudes if isinstance(state, StateVector) else np.asarray(state, complex)
    if psi.shape[0] != basis.dim:
        raise ValueError(f"state dim {psi.shape[0]} does not match basis dim {basis.dim}")
    nrm = np.linalg.norm(psi)
    if abs(nrm - 1.0) > 1e-8:
        raise ValueError(f"state must be normalized, |psi| = {nrm}")
    # boson-major flat index -> psi[n, m]
    return psi.reshape(basis.fock_cutoff + 1, basis.n_spins + 1)


def boson_q(state, basis: BasisSpec, re_axis=None, im_axis=None) -> QFunctionGrid:
    """Q(alpha) of the mode after tracing over the spins.

    The truncated coherent overlap loses accuracy once |alpha|^2 exceeds
    M/2 while the state actually occupies levels up there; the result
    carries a warning flag when both happen.
    """
    edge = math.sqrt(max(basis.fock_cutoff, 1))
    if re_axis is None:
        re_axis = np.linspace(-edge, edge, DEFAULT_BOSON_POINTS)
    if im_axis is None:
        im_axis = np.linspace(-edge, edge, DEFAULT_BOSON_POINTS)
    re_axis = np.asarray(re_axis, dtype=float)
    im_axis = np.asarray(im_axis, dtype=float)
    w = _amplitude_matrix(state, basis)
    m_cut = basis.fock_cutoff
    n = np.arange(m_cut + 1)
    half_lgamma = 0.5 * gammaln(n + 1.0)

    values = np.empty((re_axis.size, im_axis.size))
    alphas_im = 1j * im_axis
    for i, re in enumerate(re_axis):
        a = re + alphas_im
        mag = np.abs(a)
        with np.errstate(divide="ignore"):
            log_mag = np.log(np.where(mag > 0, mag, 1.0))
        log_amp = -0.5 * mag[:, None] ** 2 + n[None, :] * log_mag[:, None] - half_lgamma[None, :]
        phase = -n[None, :] * np.angle(a)[:, None]
        coeff = np.exp(log_amp + 1j * phase)
        coeff[mag == 0] = 0.0
        coeff[mag == 0, 0] = 1.0
        overlap = coeff @ w  # (im, N+1)
        values[i, :] = (np.abs(overlap) ** 2).sum(axis=1) / math.pi

    warning = None
    grid_r2 = re_axis[:, None] ** 2 + im_axis[None, :] ** 2
    if grid_r2.max() > 0.5 * m_cut:
        occupancy = (np.abs(w) ** 2).sum(axis=1)
        tail = float(occupancy[n > 0.5 * m_cut].sum())
        if tail > 1e-6:
            warning = (
                f"grid reaches |alpha|^2 = {grid_r2.max():.3g} > M/2 = {0.5 * m_cut:.3g} "
                f"and the state holds population {tail:.3g} above level M/2; "
                "truncated coherent overlaps are inaccurate there"
            )
    return QFunctionGrid(
        kind="boson",
        axes=(re_axis, im_axis),
        values=values,
        prefactor_included=True,
        n_spins=basis.n_spins,
        fock_cutoff=basis.fock_cutoff,
        warning=warning,
    )


def coherent_spin_amplitudes(n_spins: int, theta: float, phi: float) -> np.ndarray:
    """Dicke amplitudes <s,m|theta,phi> for m = -s..s (ascending)."""
    s = n_spins / 2.0
    m = np.arange(n_spins + 1) - s
    up = (s + m).round().astype(int)
    down = (s - m).round().astype(int)
    log_binom = 0.5 * (gammaln(n_spins + 1.0) - gammaln(up + 1.0) - gammaln(down + 1.0))
    lc = math.log(math.cos(theta / 2.0)) if math.cos(theta / 2.0) > 0 else -math.inf
    ls = math.log(math.sin(theta / 2.0)) if math.sin(theta / 2.0) > 0 else -math.inf
    with np.errstate(invalid="ignore"):
        log_mag = log_binom + np.where(up > 0, up * lc, 0.0) + np.where(down > 0, down * ls, 0.0)
    return np.exp(log_mag) * np.exp(1j * down * phi)


def spin_q(state, basis: BasisSpec, theta_axis=None, phi_axis=None) -> QFunctionGrid:
    """Q(theta, phi) of the collective spin after tracing the mode."""
    if theta_axis is None:
        theta_axis = np.linspace(0.0, math.pi, DEFAULT_THETA_POINTS)
    if phi_axis is None:
        phi_axis = np.linspace(0.0, 2.0 * math.pi, DEFAULT_PHI_POINTS, endpoint=False)
    theta_axis = np.asarray(theta_axis, dtype=float)
    phi_axis = np.asarray(phi_axis, dtype=float)
    w = _amplitude_matrix(state, basis)
    n_spins = basis.n_spins
    s = n_spins / 2.0
    m = np.arange(n_spins + 1) - s
    up = (s + m).round().astype(int)
    down = (s - m).round().astype(int)
    log_binom = 0.5 * (gammaln(n_spins + 1.0) - gammaln(up + 1.0) - gammaln(down + 1.0))
    # conj(<s,m|theta,phi>) phases, shared across theta rows
    phase = np.exp(-1j * down[:, None] * phi_axis[None, :])
    prefactor = (n_spins + 1.0) / (4.0 * math.pi)

    values = np.empty((theta_axis.size, phi_axis.size))
    for i, theta in enumerate(theta_axis):
        c, sn = math.cos(theta / 2.0), math.sin(theta / 2.0)
        lc = math.log(c) if c > 0 else -math.inf
        ls = math.log(sn) if sn > 0 else -math.inf
        with np.errstate(invalid="ignore"):
            log_mag = log_binom + np.where(up > 0, up * lc, 0.0) + np.where(down > 0, down * ls, 0.0)
        mag = np.exp(log_mag)
        overlap = (w * mag[None, :]) @ phase  # (M+1, phi)
        values[i, :] = prefactor * (np.abs(overlap) ** 2).sum(axis=0)

    return QFunctionGrid(
        kind="spin",
        axes=(theta_axis, phi_axis),
        values=values,
        prefactor_included=True,
        n_spins=basis.n_spins,
        fock_cutoff=basis.fock_cutoff,
    )


def local_maxima(grid: QFunctionGrid, rel_threshold: float = 1e-3):
    """Strict local maxima above ``rel_threshold * max``, sorted by height.

    The phi axis of a spin grid is treated as periodic, and the theta = 0
    and theta = pi rows each collapse to a single entry (the poles are one
    physical point; machine noise would otherwise split them into many
    equal-height maxima).  Returns (axis0_value, axis1_value, q_value)
    triples.
    """
    v = grid.values
    peak = v.max()
    wrap = grid.kind == "spin"
    mask = v > rel_threshold * peak
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            shifted = np.roll(v, (di, dj), axis=(0, 1))
            if not wrap:
                if di == 1:
                    shifted[0, :] = -np.inf
                elif di == -1:
                    shifted[-1, :] = -np.inf
                if dj == 1:
                    shifted[:, 0] = -np.inf
                elif dj == -1:
                    shifted[:, -1] = -np.inf
            elif di != 0:
                # theta stays non-periodic
                if di == 1:
                    shifted[0, :] = -np.inf
                else:
                    shifted[-1, :] = -np.inf
            mask &= v > shifted
    a0, a1 = grid.axes
    found = []
    pole_rows = []
    if wrap:
        for row, theta in ((0, a0[0]), (v.shape[0] - 1, a0[-1])):
            if math.sin(theta) < 1e-12:
                pole_rows.append(row)
    for i, j in zip(*np.nonzero(mask)):
        if i in pole_rows:
            continue
        found.append((float(a0[i]), float(a1[j]), float(v[i, j])))
    for row in pole_rows:
        interior = row + 1 if row == 0 else row - 1
        if v[row].max() > rel_threshold * peak and v[row].max() > v[interior].max():
            found.append((float(a0[row]), 0.0, float(v[row].max())))
    return sorted(found, key=lambda t: -t[2])
