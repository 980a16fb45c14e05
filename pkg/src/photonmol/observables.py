"""Occupations and second-order correlation functions of the normal modes.

g2(tau) = <c'(0) c'(tau) c(tau) c(0)> / <c'c>^2 in the steady state, for
c one of the normal-mode annihilation operators.  g2(0) < 1 diagnoses
antibunching, g2(0) > 1 bunching; a coherent (linear, U = 0) steady
state gives exactly 1 at every delay.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import VacuumOccupation
from .fock import FockBasis, OperatorMatrix
from .model import Liouvillian, SystemParams
from .solvers import (
    DEFAULT_CONFIG,
    DensityMatrix,
    SolverConfig,
    two_time_correlator_grid,
)

# below this mode occupation the g2 ratio is 0/0 and is reported as an
# explicit error instead of a number
OCCUPATION_FLOOR = 1e-14

# tolerated numerical negativity before clamping g2 values to zero
NEGATIVITY_FLOOR = -1e-10

_G2_CONSISTENCY_TOL = 1e-8


@dataclass
class CorrelationResult:
    """A g2(tau) scan for one normal mode, plus its steady-state occupation."""

    mode: str
    tau_grid: np.ndarray
    g2_values: np.ndarray
    occupation: float
    params: SystemParams
    clamped_indices: tuple[int, ...] = field(default_factory=tuple)


def _real_expectation(op_mat: np.ndarray, rho: np.ndarray, what: str) -> float:
    value = np.einsum("ij,ji->", op_mat, rho)
    if abs(value.imag) > 1e-10 * max(abs(value.real), 1.0):
        raise ValueError(f"{what} expectation has imaginary residual {value.imag:.3e}")
    return float(value.real)


def _clamp_g2(values: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    below = values < 0.0
    if np.any(values < NEGATIVITY_FLOOR):
        worst = float(values.min())
        raise ValueError(f"g2 value {worst:.3e} below the numerical negativity floor")
    clamped = np.where(below, 0.0, values)
    return clamped, tuple(int(i) for i in np.flatnonzero(below))


def occupations(rho_ss: DensityMatrix, basis: FockBasis) -> tuple[float, float]:
    """Steady-state photon numbers (<c+'c+>, <c-'c->) from the diagonal."""
    populations = np.real(np.diag(rho_ss.mat))
    n_plus = sum(p * n for p, (n, _) in zip(populations, basis.states))
    n_minus = sum(p * n for p, (_, n) in zip(populations, basis.states))
    # the state is positive only up to solver tolerance; never report -1e-22
    return max(float(n_plus), 0.0), max(float(n_minus), 0.0)


def g2_zero(rho_ss: DensityMatrix, c: OperatorMatrix,
            occupation_floor: float = OCCUPATION_FLOOR) -> float:
    """Equal-time second-order correlation <c'c'cc> / <c'c>^2."""
    cmat = c.mat
    number_op = cmat.conj().T @ cmat
    occupation = _real_expectation(number_op, rho_ss.mat, "occupation")
    if occupation <= occupation_floor:
        raise VacuumOccupation(
            f"mode occupation {occupation:.3e} is at or below the floor "
            f"{occupation_floor:.0e}; g2(0) is undefined"
        )
    pair_op = cmat.conj().T @ number_op @ cmat  # equals c'c'cc
    pair = _real_expectation(pair_op, rho_ss.mat, "pair correlation")
    value, _ = _clamp_g2(np.array([pair / occupation**2]))
    return float(value[0])


def g2_tau(liouvillian: Liouvillian, rho_ss: DensityMatrix, c: OperatorMatrix,
           tau_grid: np.ndarray, cfg: SolverConfig = DEFAULT_CONFIG,
           mode: str = "plus",
           occupation_floor: float = OCCUPATION_FLOOR) -> CorrelationResult:
    """Normalized g2 over a grid of delays starting at tau = 0.

    One propagation sweeps the whole grid.  The tau = 0 entry is checked
    against the direct equal-time evaluation, and small negative values
    from round-off are clamped to zero (recorded in clamped_indices).
    """
    tau_grid = np.asarray(tau_grid, dtype=float)
    if len(tau_grid) == 0 or tau_grid[0] != 0.0 or np.any(np.diff(tau_grid) <= 0):
        raise ValueError("tau_grid must start at 0 and be strictly increasing")

    cmat = c.mat
    number_op = cmat.conj().T @ cmat
    occupation = _real_expectation(number_op, rho_ss.mat, "occupation")
    if occupation <= occupation_floor:
        raise VacuumOccupation(
            f"mode occupation {occupation:.3e} is at or below the floor "
            f"{occupation_floor:.0e}; g2(tau) is undefined"
        )

    correlators = two_time_correlator_grid(liouvillian, rho_ss, c, tau_grid, cfg)
    imag_max = float(np.abs(correlators.imag).max())
    if imag_max > 1e-8:
        raise ValueError(f"correlator imaginary residual {imag_max:.3e} exceeds 1e-8")
    g2, clamped = _clamp_g2(correlators.real / occupation**2)

    zero_delay = g2_zero(rho_ss, c)
    if abs(g2[0] - zero_delay) > _G2_CONSISTENCY_TOL * max(zero_delay, 1.0):
        raise ValueError(
            f"g2(tau=0) = {g2[0]:.12g} disagrees with the equal-time value "
            f"{zero_delay:.12g}"
        )

    return CorrelationResult(
        mode=mode,
        tau_grid=tau_grid,
        g2_values=g2,
        occupation=occupation,
        params=liouvillian.params,
        clamped_indices=clamped,
    )


def dominant_period(tau_grid: np.ndarray, values: np.ndarray) -> float:
    """Mean spacing of successive interior local maxima of a sampled signal.

    Robust way to read off the oscillation period of a g2(tau) trace
    without any spectral estimation.  Requires at least two maxima.
    """
    tau_grid = np.asarray(tau_grid, dtype=float)
    values = np.asarray(values, dtype=float)
    interior = (values[1:-1] > values[:-2]) & (values[1:-1] >= values[2:])
    peaks = np.flatnonzero(interior) + 1
    if len(peaks) < 2:
        raise ValueError("fewer than two local maxima; cannot estimate a period")
    return float(np.mean(np.diff(tau_grid[peaks])))
