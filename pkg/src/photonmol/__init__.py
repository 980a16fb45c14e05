"""Photon statistics of normal modes in a driven-dissipative Kerr photonic molecule."""

__version__ = "0.1.0"

from .analytic import (
    AnalyticAmplitudes,
    OptimalConditions,
    analytic_g2_zero,
    optimal_conditions,
    optimality_residual,
    short_time_populations,
    solve_amplitudes,
)
from .errors import (
    BasisMismatch,
    ConvergenceFailure,
    DegenerateCoupling,
    SimulationError,
    SingularAmplitudeSystem,
    SingularSystem,
    StepSizeTooLarge,
    VacuumOccupation,
)
from .fock import (
    FockBasis,
    OperatorMatrix,
    annihilation_minus,
    annihilation_plus,
    build_basis,
    local_mode_ops,
    number_minus,
    number_plus,
    vacuum_projector,
)
from .model import (
    Liouvillian,
    SystemParams,
    build_liouvillian,
    hamiltonian_local,
    hamiltonian_normal,
)
from .observables import (
    CorrelationResult,
    dominant_period,
    g2_tau,
    g2_zero,
    occupations,
)
from .solvers import (
    DensityMatrix,
    SolverConfig,
    evolve,
    steady_state,
    two_time_correlator,
    two_time_correlator_grid,
)
from .sweep import Axis, SweepResult, SweepSpec, emit_csv, run_point, run_sweep

__all__ = [name for name in dir() if not name.startswith("_")]
