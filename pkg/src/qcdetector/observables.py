"""Order parameters and boson-number moments of a state.

All six quantities are quadratic forms on the truncated space:

    zeta_S  = <d'd> / N          superradiant order parameter
    zeta_Mx = <S_x^2> / N^2      magnetic fluctuation along x
    zeta_My = <S_y^2> / N^2      magnetic fluctuation along y
    m_z     = <S_z> / N          mean magnetization (diagnostic only; it
                                 does not resolve the first-order transition)
    n_mean  = <d'd>,  n_var = <(d'd)^2> - <d'd>^2

<(d'd)^2> is evaluated as ||d'd psi||^2, which keeps n_var >= 0 up to
roundoff.  Every quantity commutes with the parity, so any mixture of the
two degenerate ferromagnetic ground states measures identically.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .basis import BasisSpec, spin_operator
from .solver import StateVector

GAIN_FLOOR = 1e-12
SQNR_FLOOR = 1e-14


@dataclass(frozen=True)
class ObservableSet:
    zeta_S: float
    zeta_Mx: float
    zeta_My: float
    m_z: float
    n_mean: float
    n_var: float


@lru_cache(maxsize=16)
def _measure_cache(n_spins: int, fock_cutoff: int):
    basis = BasisSpec(n_spins, fock_cutoff, (n_spins + 1) * (fock_cutoff + 1))
    return (
        basis.boson_occupancy().astype(float),
        basis.magnetic_number(),
        spin_operator(basis, "x").matrix,
        spin_operator(basis, "y").matrix,
    )


def _amplitudes(state) -> np.ndarray:
    if isinstance(state, StateVector):
        return state.amplitudes
    return np.asarray(state, dtype=np.complex128)


def measure(state, basis: BasisSpec) -> ObservableSet:
    """Evaluate all order parameters and moments on a normalized state."""
    psi = _amplitudes(state)
    if psi.shape[0] != basis.dim:
        raise ValueError(f"state dim {psi.shape[0]} does not match basis dim {basis.dim}")
    n_diag, m_diag, s_x, s_y = _measure_cache(basis.n_spins, basis.fock_cutoff)
    prob = np.abs(psi) ** 2
    n_mean = float(n_diag @ prob)
    n_sq = float((n_diag**2) @ prob)
    m_z = float(m_diag @ prob)
    sx_psi = s_x @ psi
    sy_psi = s_y @ psi
    n = basis.n_spins
    return ObservableSet(
        zeta_S=n_mean / n,
        zeta_Mx=float(np.vdot(sx_psi, sx_psi).real) / n**2,
        zeta_My=float(np.vdot(sy_psi, sy_psi).real) / n**2,
        m_z=m_z / n,
        n_mean=n_mean,
        n_var=n_sq - n_mean**2,
    )


def gain(n_t: float, n_0: float) -> float:
    """Boson-number amplification factor g = <n>(t) / <n>(0).

    Below the denominator floor the ratio is degenerate; NaN is returned
    as the flagged value (callers report the absolute n_t alongside).
    """
    if n_0 <= GAIN_FLOOR:
        return math.nan
    return n_t / n_0


def sqnr(n_mean: float, n_var: float) -> float:
    """Signal-to-quantum-noise ratio <n>^2 / Var(n).

    A variance at or below the floor makes the ratio undefined; the
    flagged value is +inf for a finite signal and NaN otherwise.
    """
    if n_var <= SQNR_FLOOR:
        return math.inf if n_mean > 0 else math.nan
    return n_mean**2 / n_var
