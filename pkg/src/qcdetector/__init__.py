"""Exact diagonalization and time evolution of the Dicke-LMGy detector model.

A collective spin of N two-level systems couples to a truncated boson mode.
The package computes ground states, order parameters, the sensitivity
function and its finite-size scaling, quench-driven amplification dynamics,
Husimi quasi-probability distributions, and the mean-field phase diagram,
all behind a batch CLI (``qcd``) that writes JSON/CSV records plus optional
matplotlib renderings.
"""

from .basis import BasisSpec, SparseOperator, make_basis, spin_operator, boson_operator
from .hamiltonian import (
    ModelParams,
    QuenchProfile,
    build_hamiltonian,
    build_time_dependent,
    lambda_at,
)
from .solver import (
    EvolutionConfig,
    GroundState,
    StateVector,
    dense_spectrum_oracle,
    evolve,
    ground_state,
    ground_state_even_parity,
)
from .observables import ObservableSet, gain, measure, sqnr
from .meanfield import MeanFieldSolution, PhaseBoundaries, classify, energy_per_spin, minimize
from .criticality import ChiScan, ScalingFit, chi_scan, estimation_error, fit_scaling, slope_vs_j
from .husimi import QFunctionGrid, boson_q, spin_q

__version__ = "0.1.0"
