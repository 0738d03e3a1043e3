"""Exact desk-scale simulations of the transverse-field LMG model.

Spectra and equilibrium markers of the h = 1 phase transition, sudden
quench dynamics through the time-dependent fidelity, dynamical
orthogonality and its finite-size scaling, quench work statistics, and
spectral functions.  Everything is exact diagonalization in the maximal
collective-spin sector; no stochastic or time-stepping methods anywhere,
so all results are deterministic.
"""

from .model import (
    ModelParams,
    CollectiveBasis,
    HamiltonianMatrix,
    EigenDecomposition,
    build_basis,
    build_hamiltonian,
    dense_operator_hamiltonian,
    collective_spin_operators,
    diagonalize,
    eigenvalues,
    ground_state,
    degenerate_groups,
)
from .statics import GapCurve, CurvatureCurve, gap_curve, second_derivative_energy
from .quench import (
    QuenchSpec,
    OverlapDistribution,
    FidelitySeries,
    ScalingResult,
    overlap_distribution,
    overlap_amplitude,
    fidelity_series,
    minimum_fidelity,
    scan_minimum_fidelity,
    orthogonality_field,
    extrapolate_critical_field,
)
from .thermo import WorkStats, ThermoSweep, work_stats, thermo_sweep
from .spectral import SpectralCurve, spectral_function, default_omega_grid

__version__ = "0.1.0"

__all__ = [
    "ModelParams",
    "CollectiveBasis",
    "HamiltonianMatrix",
    "EigenDecomposition",
    "build_basis",
    "build_hamiltonian",
    "dense_operator_hamiltonian",
    "collective_spin_operators",
    "diagonalize",
    "eigenvalues",
    "ground_state",
    "degenerate_groups",
    "GapCurve",
    "CurvatureCurve",
    "gap_curve",
    "second_derivative_energy",
    "QuenchSpec",
    "OverlapDistribution",
    "FidelitySeries",
    "ScalingResult",
    "overlap_distribution",
    "overlap_amplitude",
    "fidelity_series",
    "minimum_fidelity",
    "scan_minimum_fidelity",
    "orthogonality_field",
    "extrapolate_critical_field",
    "WorkStats",
    "ThermoSweep",
    "work_stats",
    "thermo_sweep",
    "SpectralCurve",
    "spectral_function",
    "default_omega_grid",
    "__version__",
]
