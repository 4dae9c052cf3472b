"""Simulator for 1-D arrays of coupled cavities doped with two-level emitters.

Builds fixed-excitation-sector bases, assembles the chain Hamiltonian and its
jump operators, computes ground states and dynamics (unitary, adiabatic, and
stochastic quantum-jump), and drives the packaged experiments through a CLI.
"""

__version__ = "0.1.0"

from .hilbert import BasisSector, Boundary, LatticeSpec, SiteConfig, enumerate_sector, local_occupation
from .hamiltonian import (
    ModelParams,
    SparseOperator,
    build_collapse_operators,
    build_hamiltonian,
    dispersive_shift,
    polariton_energy,
    polariton_product_state,
)
from .states import QuantumState
from .solvers import (
    AdiabaticResult,
    ConvergenceError,
    RampSchedule,
    TrajectoryRecord,
    adiabatic_ramp,
    ensemble_average,
    evolve,
    ground_state,
    quantum_trajectory,
)
from .observables import excitation_moments, fidelity, middle_site, polariton_population

__all__ = [
    "__version__",
    "BasisSector",
    "Boundary",
    "LatticeSpec",
    "SiteConfig",
    "enumerate_sector",
    "local_occupation",
    "ModelParams",
    "SparseOperator",
    "build_collapse_operators",
    "build_hamiltonian",
    "dispersive_shift",
    "polariton_energy",
    "polariton_product_state",
    "QuantumState",
    "AdiabaticResult",
    "ConvergenceError",
    "RampSchedule",
    "TrajectoryRecord",
    "adiabatic_ramp",
    "ensemble_average",
    "evolve",
    "ground_state",
    "quantum_trajectory",
    "excitation_moments",
    "fidelity",
    "middle_site",
    "polariton_population",
]
