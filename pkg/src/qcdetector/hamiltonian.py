"""Assembly of the detector Hamiltonian, static or with a ramped coupling.

In collective-spin form (energies in units of the mode frequency omega0),

    H = d'd + (2 lambda / sqrt(N)) S_x (d + d') + epsilon S_z - (2 J / N) S_y^2.

The 1/sqrt(N) and 1/N normalizations are applied here at assembly time, so
one set of cached elementary operators serves every parameter point.  A
quench replaces lambda by lambda(t) = lambda0 + dlambda * P_e(t) with a
configurable envelope P_e.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .basis import BasisSpec, SparseOperator, _as_operator, boson_operator, spin_operator

ENVELOPES = ("tanh_ramp", "exp_saturation", "sin2_ramp", "tabulated")


@dataclass(frozen=True)
class ModelParams:
    """Couplings of the model, all in units of the mode frequency."""

    epsilon: float = 1.0
    lam: float = 0.0
    j_coupling: float = 0.0
    omega0: float = 1.0

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if self.lam < 0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")
        if self.j_coupling < 0:
            raise ValueError(f"j_coupling must be >= 0, got {self.j_coupling}")
        if self.omega0 <= 0:
            raise ValueError(f"omega0 must be > 0, got {self.omega0}")

    def replace_lambda(self, lam: float) -> "ModelParams":
        return ModelParams(self.epsilon, lam, self.j_coupling, self.omega0)


@dataclass(frozen=True)
class QuenchProfile:
    """Ramped coupling lambda(t) = lambda0 + delta_lambda * P_e(t).

    Built-in envelopes (all satisfy P_e(0) = 0 and saturate at 1):

        tanh_ramp       P_e(t) = tanh^2(t / tau)
        exp_saturation  P_e(t) = 1 - exp(-t / tau)
        sin2_ramp       P_e(t) = sin^2(pi t / (2 tau)) for t <= tau, then 1

    A tabulated envelope interpolates linearly between (t_i, p_i) samples
    and clamps outside the table.
    """

    lambda0: float
    delta_lambda: float = 0.0
    envelope: str = "tanh_ramp"
    timescale: float = 10.0
    table: tuple = field(default=None, repr=False)

    def __post_init__(self):
        if self.envelope not in ENVELOPES:
            raise ValueError(f"envelope must be one of {ENVELOPES}, got {self.envelope!r}")
        if self.envelope != "tabulated" and self.timescale <= 0:
            raise ValueError(f"timescale must be > 0, got {self.timescale}")
        if self.envelope == "tabulated":
            if self.table is None:
                raise ValueError("tabulated envelope requires a (times, values) table")
            t, p = (np.asarray(col, dtype=float) for col in self.table)
            if t.ndim != 1 or t.shape != p.shape or t.size < 2:
                raise ValueError("envelope table must be two equal-length columns")
            if np.any(np.diff(t) <= 0):
                raise ValueError("envelope table times must be strictly increasing")
            if np.any(p < 0) or np.any(p > 1):
                raise ValueError("envelope values must lie in [0, 1]")
            if self.envelope_at(0.0) != 0.0:
                raise ValueError("envelope must satisfy P_e(0) = 0")

    def envelope_at(self, t):
        """Evaluate P_e(t) for scalar or array t >= 0."""
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise ValueError("time must be >= 0")
        if self.envelope == "tanh_ramp":
            p = np.tanh(t / self.timescale) ** 2
        elif self.envelope == "exp_saturation":
            p = 1.0 - np.exp(-t / self.timescale)
        elif self.envelope == "sin2_ramp":
            p = np.where(t < self.timescale, np.sin(0.5 * np.pi * t / self.timescale) ** 2, 1.0)
        else:
            ts, ps = (np.asarray(col, dtype=float) for col in self.table)
            p = np.interp(t, ts, ps)
        return p if p.ndim else float(p)


def load_envelope_table(path) -> tuple:
    """Read a whitespace-delimited two-column (t, P_e) envelope file."""
    data = np.loadtxt(path, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ValueError(f"{path}: expected two whitespace-delimited columns")
    return (tuple(data[:, 0]), tuple(data[:, 1]))


def lambda_at(profile: QuenchProfile, t):
    """Coupling value lambda0 + delta_lambda * P_e(t)."""
    p = profile.envelope_at(t)
    return profile.lambda0 + profile.delta_lambda * p


@lru_cache(maxsize=16)
def _assembly_parts(n_spins: int, fock_cutoff: int):
    """Parameter-independent pieces: number, S_z, S_y^2, and S_x(d + d')."""
    basis = BasisSpec(n_spins, fock_cutoff, (n_spins + 1) * (fock_cutoff + 1))
    number = boson_operator(basis, "number").matrix
    s_z = spin_operator(basis, "z").matrix
    s_y = spin_operator(basis, "y").matrix
    s_y2 = (s_y @ s_y).tocsr()
    coupling = (spin_operator(basis, "x").matrix @ boson_operator(basis, "position").matrix).tocsr()
    return number, s_z, s_y2, coupling


def _rest_matrix(basis: BasisSpec, params: ModelParams):
    number, s_z, s_y2, _ = _assembly_parts(basis.n_spins, basis.fock_cutoff)
    n = basis.n_spins
    return params.omega0 * (number + params.epsilon * s_z - (2.0 * params.j_coupling / n) * s_y2)


def _coupling_matrix(basis: BasisSpec, params: ModelParams):
    _, _, _, coupling = _assembly_parts(basis.n_spins, basis.fock_cutoff)
    return params.omega0 * (2.0 / math.sqrt(basis.n_spins)) * coupling


def build_hamiltonian(basis: BasisSpec, params: ModelParams) -> SparseOperator:
    """Assemble H for one parameter point as a Hermitian sparse matrix."""
    _check_basis(basis)
    h = _rest_matrix(basis, params) + params.lam * _coupling_matrix(basis, params)
    return _as_operator(h, hermitian=True)


def build_time_dependent(basis: BasisSpec, params: ModelParams, profile: QuenchProfile):
    """Split H(t) = H_rest + lambda(t) * H_coupling for the propagator.

    Returns (h_rest, h_coupling, schedule) where schedule(t) = lambda(t).
    Reassembling h_rest + schedule(t) * h_coupling reproduces
    build_hamiltonian at lambda = lambda_at(profile, t) exactly.
    """
    _check_basis(basis)
    h_rest = _as_operator(_rest_matrix(basis, params), hermitian=True)
    h_coupling = _as_operator(_coupling_matrix(basis, params), hermitian=True)

    def schedule(t):
        return lambda_at(profile, t)

    return h_rest, h_coupling, schedule


def _check_basis(basis: BasisSpec):
    if basis.dim != (basis.n_spins + 1) * (basis.fock_cutoff + 1):
        raise ValueError(f"inconsistent basis dimensions: {basis}")
