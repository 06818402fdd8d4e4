"""Product coherent-state theory of the phase diagram.

The trial state is a boson coherent state |sqrt(N) alpha> times a spin
coherent state |theta, phi>.  To leading order in N the energy per spin is

    e = |alpha|^2 + 2 lambda Re(alpha) sin(theta) cos(phi)
        + (epsilon/2) cos(theta) - (J/2) sin^2(theta) sin^2(phi),

whose three stationary branches are the paramagnetic-normal (PN),
ferromagnetic-normal (FN), and ferromagnetic-superradiant (FS) phases:

    PN  alpha = 0, theta = pi                 e = -eps/2
    FN  alpha = 0, cos(theta) = -eps/(2J),
        phi in {pi/2, 3pi/2}                  e = -J/2 - eps^2/(8J)
    FS  alpha = -lambda sin(theta) cos(phi),
        cos(theta) = -eps/(4 lambda^2),
        phi in {0, pi}                        e = -lambda^2 - eps^2/(16 lambda^2)

Second-order boundaries sit at lambda_cII = sqrt(eps)/2 and J_cII = eps/2;
the FN and FS branches cross with a level crossing (first order) exactly
on J = 2 lambda^2.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from .hamiltonian import ModelParams

DEGENERACY_TOL = 1e-12
BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class MeanFieldSolution:
    """Global minimizer of the product-ansatz energy landscape."""

    alpha: complex
    theta: float
    phi: float
    energy_per_spin: float
    phase: str
    degenerate_partner: tuple = None

    def order_parameters(self):
        """(zeta_S, zeta_Mx, zeta_My, m_z) of the trial state, leading order."""
        st, ct = math.sin(self.theta), math.cos(self.theta)
        return (
            abs(self.alpha) ** 2,
            (st * math.cos(self.phi) / 2.0) ** 2,
            (st * math.sin(self.phi) / 2.0) ** 2,
            ct / 2.0,
        )


@dataclass(frozen=True)
class PhaseBoundaries:
    """Critical lines of the phase diagram for a given spin splitting."""

    epsilon: float

    @property
    def lambda_c2(self) -> float:
        return math.sqrt(self.epsilon) / 2.0

    @property
    def j_c2(self) -> float:
        return self.epsilon / 2.0

    @property
    def triple_point(self) -> tuple:
        return (self.lambda_c2, self.j_c2)

    def lambda_c1(self, j: float) -> float:
        """First-order critical coupling sqrt(J/2) on the J = 2 lambda^2 line."""
        return math.sqrt(j / 2.0)

    def critical_lambda(self, j: float) -> float:
        """Coupling at which the ground state leaves the normal phase."""
        return self.lambda_c1(j) if j > self.j_c2 else self.lambda_c2


def energy_per_spin(params: ModelParams, alpha: complex, theta: float, phi: float) -> float:
    """Trial-state energy per spin, exact in the N -> infinity limit."""
    a = complex(alpha)
    st = math.sin(theta)
    return (
        abs(a) ** 2
        + 2.0 * params.lam * a.real * st * math.cos(phi)
        + 0.5 * params.epsilon * math.cos(theta)
        - 0.5 * params.j_coupling * st**2 * math.sin(phi) ** 2
    )


def _energy_and_grad(x, lam, eps, j):
    ar, ai, theta, phi = x
    st, ct = math.sin(theta), math.cos(theta)
    sp_, cp = math.sin(phi), math.cos(phi)
    e = ar**2 + ai**2 + 2 * lam * ar * st * cp + 0.5 * eps * ct - 0.5 * j * st**2 * sp_**2
    grad = np.array(
        [
            2 * ar + 2 * lam * st * cp,
            2 * ai,
            2 * lam * ar * ct * cp - 0.5 * eps * st - j * st * ct * sp_**2,
            -2 * lam * ar * st * sp_ - j * st**2 * sp_ * cp,
        ]
    )
    return e, grad


def _stationary_candidates(params: ModelParams):
    """Analytic seeds covering the three stationary branches."""
    eps, lam, j = params.epsilon, params.lam, params.j_coupling
    seeds = [np.array([0.0, 0.0, math.pi, 0.0])]  # PN
    if j > 0:
        ct = max(-1.0, min(1.0, -eps / (2.0 * j)))
        seeds.append(np.array([0.0, 0.0, math.acos(ct), math.pi / 2.0]))  # FN
    if lam > 0:
        ct = max(-1.0, min(1.0, -eps / (4.0 * lam**2)))
        theta = math.acos(ct)
        seeds.append(np.array([-lam * math.sin(theta), 0.0, theta, 0.0]))  # FS
    return seeds


def minimize(params: ModelParams) -> MeanFieldSolution:
    """Global product-ansatz minimizer via multi-start local descent.

    The three analytic candidates cover every stationary branch of the
    landscape, so seeded local descent finds the global minimum.
    """
    best = None
    for seed in _stationary_candidates(params):
        res = _scipy_minimize(
            _energy_and_grad,
            seed,
            args=(params.lam, params.epsilon, params.j_coupling),
            jac=True,
            method="L-BFGS-B",
            bounds=[(None, None), (None, None), (0.0, math.pi), (0.0, 2.0 * math.pi)],
            options={"ftol": 1e-16, "gtol": 1e-12, "maxiter": 500},
        )
        if best is None or res.fun < best.fun:
            best = res
    ar, ai, theta, phi = best.x
    alpha = complex(ar, ai)
    energy = float(best.fun)
    phase = _label_from_solution(alpha, theta, params)
    partner = _degenerate_partner(alpha, theta, phi, energy, params, phase)
    return MeanFieldSolution(
        alpha=alpha,
        theta=float(theta),
        phi=float(phi % (2.0 * math.pi)),
        energy_per_spin=energy,
        phase=phase,
        degenerate_partner=partner,
    )


def _label_from_solution(alpha, theta, params) -> str:
    superradiant = abs(alpha) > 1e-6
    magnetic = abs(math.sin(theta)) > 1e-6
    if superradiant:
        return "FS"
    return "FN" if magnetic else "PN"


def _degenerate_partner(alpha, theta, phi, energy, params, phase):
    if phase == "FS":
        partner = (-alpha, theta, (phi + math.pi) % (2.0 * math.pi))
    elif phase == "FN":
        partner = (alpha, theta, (phi + math.pi) % (2.0 * math.pi))
    else:
        return None
    if abs(energy_per_spin(params, *partner) - energy) < DEGENERACY_TOL:
        return partner
    return None


def classify(params: ModelParams, boundary_tol: float = BOUNDARY_TOL):
    """Phase label from the stability conditions, plus boundary distances.

    Stability regions: PN needs eps > 4 lambda^2 and eps > 2J; FN needs
    J > eps/2 and J > 2 lambda^2; FS needs 4 lambda^2 > eps and
    2 lambda^2 > J.  Points within ``boundary_tol`` of a critical line are
    labeled by the boundary name instead of a phase.

    Returns (label, distances) with distances keyed by boundary name.
    """
    eps, lam, j = params.epsilon, params.lam, params.j_coupling
    b = PhaseBoundaries(eps)
    d_lambda = lam - b.lambda_c2
    d_j = j - b.j_c2
    d_first = j - 2.0 * lam**2
    distances = {
        "lambda_c2": d_lambda,
        "j_c2": d_j,
        "first_order": d_first,
    }
    on_lambda = abs(d_lambda) <= boundary_tol
    on_j = abs(d_j) <= boundary_tol
    on_first = abs(d_first) <= boundary_tol

    if on_lambda and on_j:
        return "triple_point", distances
    if on_first and (d_j > 0 or d_lambda > 0):
        return "first_order_boundary", distances
    if on_lambda and d_j < 0:
        return "lambda_c2_boundary", distances
    if on_j and d_lambda < 0:
        return "j_c2_boundary", distances

    if eps > 4.0 * lam**2 and eps > 2.0 * j:
        return "PN", distances
    if j > eps / 2.0 and j > 2.0 * lam**2:
        return "FN", distances
    if 4.0 * lam**2 > eps and 2.0 * lam**2 > j:
        return "FS", distances
    # only reachable exactly on a boundary that escaped the tolerance checks
    return "boundary", distances
