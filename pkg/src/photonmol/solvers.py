"""Steady states, time evolution, and two-time correlators.

All solvers work on the vectorized master equation d vec(rho)/dt =
L vec(rho) with column stacking (vec(rho)[i + dim*j] = rho[i, j]).

Steady state comes from one of two independent in-repo methods that
cross-check each other:

* "trace-solve" (default): replace one row of L with the trace
  constraint and solve the square linear system directly.
* "null-space": eigen-decompose L, take the right eigenvector of the
  eigenvalue closest to zero, and renormalize its trace.

Time propagation is fixed-step.  The "expm" propagator applies the exact
matrix exponential of one step repeatedly; "rk4" is a classical
fourth-order integrator with an a-posteriori step-doubling error check.
Both preserve the trace to round-off because the generator does.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    BasisMismatch,
    ConvergenceFailure,
    SingularSystem,
    StepSizeTooLarge,
)
from .fock import OperatorMatrix
from .model import Liouvillian

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_FLOOR = -1e-8


@dataclass
class DensityMatrix:
    """Hermitian, unit-trace, (numerically) positive state over a tagged basis."""

    mat: np.ndarray
    basis_tag: str

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def validate(self) -> "DensityMatrix":
        herm = np.abs(self.mat - self.mat.conj().T).max()
        if herm > HERMITICITY_TOL:
            raise ConvergenceFailure(f"state not Hermitian: max deviation {herm:.3e}")
        tr = self.mat.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise ConvergenceFailure(f"state trace {tr:.12g} deviates from 1")
        min_eig = float(np.linalg.eigvalsh(0.5 * (self.mat + self.mat.conj().T)).min())
        if min_eig < POSITIVITY_FLOOR:
            raise ConvergenceFailure(f"state not positive: min eigenvalue {min_eig:.3e}")
        return self


@dataclass(frozen=True)
class SolverConfig:
    """Numerical knobs for the solvers.

    steady_method: "trace-solve" or "null-space".
    propagator: "expm" (exact one-step exponential, default) or "rk4"
        (classical fixed-step Runge-Kutta with error monitoring).
    time_step: fixed step for rk4 in rate-unit time; None picks a step
        from the estimated spectral radius and rtol.  Ignored by expm,
        which is exact at any step.
    """

    steady_method: str = "trace-solve"
    propagator: str = "expm"
    time_step: float | None = None
    rtol: float = 1e-8
    atol: float = 1e-10
    max_time: float = 1e4

    def __post_init__(self):
        if self.steady_method not in ("trace-solve", "null-space"):
            raise ValueError(f"unknown steady_method {self.steady_method!r}")
        if self.propagator not in ("expm", "rk4"):
            raise ValueError(f"unknown propagator {self.propagator!r}")
        if self.time_step is not None and self.time_step <= 0:
            raise ValueError("time_step must be positive")
        if self.rtol <= 0 or self.atol <= 0:
            raise ValueError("tolerances must be positive")


DEFAULT_CONFIG = SolverConfig()


def _vec(mat: np.ndarray) -> np.ndarray:
    return mat.reshape(-1, order="F")


def _unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return v.reshape((dim, dim), order="F")


def _trace_indices(dim: int) -> np.ndarray:
    # positions of rho's diagonal inside vec(rho) under column stacking
    return np.arange(dim) * (dim + 1)


def _kernel_dimension(lmat: np.ndarray, tol: float) -> int:
    eigvals = scipy.linalg.eigvals(lmat)
    return int(np.sum(np.abs(eigvals) <= tol))


def _residual(lmat: np.ndarray, rho_vec: np.ndarray) -> float:
    return float(np.abs(lmat @ rho_vec).max())


def _finalize_state(rho: np.ndarray, basis_tag: str) -> DensityMatrix:
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / rho.trace().real
    return DensityMatrix(rho, basis_tag).validate()


def _steady_trace_solve(lmat: np.ndarray, dim: int, cfg: SolverConfig) -> np.ndarray:
    system = lmat.copy()
    rhs = np.zeros(lmat.shape[0], dtype=complex)
    system[0, :] = 0.0
    system[0, _trace_indices(dim)] = 1.0
    rhs[0] = 1.0
    try:
        sol = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError as exc:
        _diagnose_singularity(lmat, cfg, cause=exc)
        raise ConvergenceFailure("steady-state linear solve failed") from exc
    return sol


def _steady_null_space(lmat: np.ndarray, dim: int, cfg: SolverConfig) -> np.ndarray:
    eigvals, eigvecs = scipy.linalg.eig(lmat)
    order = np.argsort(np.abs(eigvals))
    kernel_tol = max(cfg.atol, np.abs(eigvals).max() * 1e-12)
    if len(order) > 1 and np.abs(eigvals[order[1]]) <= kernel_tol:
        n_zero = int(np.sum(np.abs(eigvals) <= kernel_tol))
        raise SingularSystem(
            f"Liouvillian kernel is {n_zero}-dimensional at tolerance {kernel_tol:.3e}"
        )
    v = eigvecs[:, order[0]]
    tr = _unvec(v, dim).trace()
    if abs(tr) < 1e-12 * np.linalg.norm(v):
        raise ConvergenceFailure("kernel vector has (numerically) zero trace")
    return v / tr


def _diagnose_singularity(lmat: np.ndarray, cfg: SolverConfig, cause=None) -> None:
    kernel_tol = max(cfg.atol, np.abs(lmat).max() * 1e-12)
    n_zero = _kernel_dimension(lmat, kernel_tol)
    if n_zero > 1:
        raise SingularSystem(
            f"Liouvillian kernel is {n_zero}-dimensional at tolerance {kernel_tol:.3e}"
        ) from cause


def steady_state(liouvillian: Liouvillian, cfg: SolverConfig = DEFAULT_CONFIG) -> DensityMatrix:
    """Density matrix annihilated by the Liouvillian, with residual check.

    Raises SingularSystem when the kernel is not one-dimensional at the
    configured tolerance and ConvergenceFailure when the residual cannot
    be met.  Under a nonzero drive the kernel of this model is
    one-dimensional, so the solve is deterministic.
    """
    lmat = liouvillian.matrix.mat
    dim = liouvillian.dim
    if cfg.steady_method == "trace-solve":
        rho_vec = _steady_trace_solve(lmat, dim, cfg)
    else:
        rho_vec = _steady_null_space(lmat, dim, cfg)

    state = _finalize_state(_unvec(rho_vec, dim), liouvillian.basis_tag)
    residual = _residual(lmat, _vec(state.mat))
    if residual > cfg.atol:
        _diagnose_singularity(lmat, cfg)
        raise ConvergenceFailure(
            f"steady-state residual {residual:.3e} exceeds atol {cfg.atol:.3e}"
        )
    return state


def _rk4_step(lmat: np.ndarray, v: np.ndarray, h: float) -> np.ndarray:
    k1 = lmat @ v
    k2 = lmat @ (v + (0.5 * h) * k1)
    k3 = lmat @ (v + (0.5 * h) * k2)
    k4 = lmat @ (v + h * k3)
    return v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _rk4_auto_step(liouvillian: Liouvillian, cfg: SolverConfig) -> float:
    """A-priori step from the spectral radius: per-step error ~ rtol/10."""
    radius = liouvillian.spectral_radius() * 1.25
    if radius == 0.0:
        return np.inf
    return (120.0 * cfg.rtol * 0.1) ** 0.2 / radius


_ERROR_CHECK_STRIDE = 32
_MAX_ERROR_STRIKES = 3


def _propagate_rk4(liouvillian: Liouvillian, v0: np.ndarray, t_grid: np.ndarray,
                   cfg: SolverConfig) -> np.ndarray:
    lmat = liouvillian.matrix.mat
    auto = _rk4_auto_step(liouvillian, cfg)
    h_max = cfg.time_step if cfg.time_step is not None else auto
    if not np.isfinite(h_max):
        h_max = float(t_grid[-1]) if t_grid[-1] > 0 else 1.0

    out = np.empty((len(t_grid), len(v0)), dtype=complex)
    v = v0.astype(complex)
    t = 0.0
    step_count = 0
    strikes = 0
    scale = max(float(np.abs(v0).max()), cfg.atol)
    divergence_limit = 1e6 * max(scale, 1.0)
    for i, t_target in enumerate(t_grid):
        span = float(t_target) - t
        if span > 0.0:
            n_steps = max(1, int(np.ceil(span / h_max)))
            h = span / n_steps
            for _ in range(n_steps):
                v_new = _rk4_step(lmat, v, h)
                # the exact dynamics is contractive, so runaway growth can
                # only come from an unstable step size
                peak = float(np.abs(v_new).max())
                if not np.isfinite(peak) or peak > divergence_limit:
                    raise StepSizeTooLarge(
                        f"solution norm {peak:.3e} diverged at step size {h:.3e}"
                    )
                # probe the first few steps back to back, then sparsely
                if step_count < _MAX_ERROR_STRIKES or step_count % _ERROR_CHECK_STRIDE == 0:
                    half = _rk4_step(lmat, _rk4_step(lmat, v, 0.5 * h), 0.5 * h)
                    err = float(np.abs(v_new - half).max()) / 15.0
                    if not np.isfinite(err) or err > cfg.rtol * scale:
                        strikes += 1
                        if strikes >= _MAX_ERROR_STRIKES or not np.isfinite(err):
                            raise StepSizeTooLarge(
                                f"local error {err:.3e} exceeds rtol*scale "
                                f"{cfg.rtol * scale:.3e} at step size {h:.3e}"
                            )
                    else:
                        strikes = 0
                    v_new = half  # the half-step result is the more accurate one
                v = v_new
                step_count += 1
            t = float(t_target)
        out[i] = v
    return out


def _propagate_expm(liouvillian: Liouvillian, v0: np.ndarray, t_grid: np.ndarray,
                    cfg: SolverConfig) -> np.ndarray:
    lmat = liouvillian.matrix.mat
    out = np.empty((len(t_grid), len(v0)), dtype=complex)
    v = v0.astype(complex)
    spacings = np.diff(np.concatenate(([0.0], np.asarray(t_grid, dtype=float))))
    # one exponential per distinct spacing; uniform grids need exactly one
    propagators: dict[float, np.ndarray] = {}
    for i, dt in enumerate(spacings):
        key = round(float(dt), 15)
        if key > 0.0:
            if key not in propagators:
                propagators[key] = scipy.linalg.expm(lmat * key)
            v = propagators[key] @ v
        out[i] = v
    return out


def propagate_grid(liouvillian: Liouvillian, mat0: np.ndarray, t_grid: np.ndarray,
                   cfg: SolverConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Propagate an arbitrary operator matrix through the master equation.

    Returns an array of shape (len(t_grid), dim, dim).  The grid must be
    non-negative and non-decreasing.  No state checks are applied: the
    input may legitimately be a non-Hermitian, non-unit-trace matrix
    (as in the regression construction for two-time correlators).
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) == 0:
        raise ValueError("t_grid must be a non-empty 1-D array")
    if t_grid[0] < 0 or np.any(np.diff(t_grid) < 0):
        raise ValueError("t_grid must be non-negative and non-decreasing")
    if t_grid[-1] > cfg.max_time:
        raise ValueError(f"t_grid exceeds max_time={cfg.max_time}")
    dim = liouvillian.dim
    if mat0.shape != (dim, dim):
        raise BasisMismatch(
            f"initial matrix of shape {mat0.shape} does not match dimension {dim}"
        )
    v0 = _vec(mat0)
    if cfg.propagator == "rk4":
        flat = _propagate_rk4(liouvillian, v0, t_grid, cfg)
    else:
        flat = _propagate_expm(liouvillian, v0, t_grid, cfg)
    # undo the column stacking row by row
    return flat.reshape(len(t_grid), dim, dim).transpose(0, 2, 1)


EVOLVE_TRACE_DRIFT = 1e-8


def evolve(liouvillian: Liouvillian, rho0: DensityMatrix, t: float,
           cfg: SolverConfig = DEFAULT_CONFIG) -> DensityMatrix:
    """Propagate a density matrix for a time t >= 0.

    The returned state satisfies the usual invariants; trace drift beyond
    1e-8 over the evolution is reported as a ConvergenceFailure.
    """
    if t < 0:
        raise ValueError(f"evolution time must be >= 0, got {t}")
    if rho0.basis_tag != liouvillian.basis_tag:
        raise BasisMismatch(
            f"state over {rho0.basis_tag!r} cannot evolve under {liouvillian.basis_tag!r}"
        )
    if t == 0.0:
        return DensityMatrix(rho0.mat.copy(), rho0.basis_tag)
    rho_t = propagate_grid(liouvillian, rho0.mat, np.array([t]), cfg)[-1]
    drift = abs(rho_t.trace() - 1.0)
    if drift > EVOLVE_TRACE_DRIFT:
        raise ConvergenceFailure(f"trace drift {drift:.3e} exceeds {EVOLVE_TRACE_DRIFT}")
    return _finalize_state(rho_t, rho0.basis_tag)


IMAG_RESIDUAL_TOL = 1e-8


def two_time_correlator_grid(liouvillian: Liouvillian, rho_ss: DensityMatrix,
                             c: OperatorMatrix, tau_grid: np.ndarray,
                             cfg: SolverConfig = DEFAULT_CONFIG) -> np.ndarray:
    """<c'(0) c'(tau) c(tau) c(0)> for every delay in tau_grid.

    Quantum regression: collapse the steady state to c rho c', propagate
    that matrix in the delay variable under the same Liouvillian, and
    read out tr(c'c  * propagated).  Returns the complex values; the
    imaginary parts must stay below 1e-8 (checked by the caller of the
    scalar wrapper and by g2 routines).
    """
    if c.basis_tag != liouvillian.basis_tag or rho_ss.basis_tag != liouvillian.basis_tag:
        raise BasisMismatch("correlator operands act on different bases")
    cmat = c.mat
    seed = cmat @ rho_ss.mat @ cmat.conj().T
    propagated = propagate_grid(liouvillian, seed, tau_grid, cfg)
    number_op = cmat.conj().T @ cmat
    return np.einsum("ij,tji->t", number_op, propagated)


def two_time_correlator(liouvillian: Liouvillian, rho_ss: DensityMatrix,
                        c: OperatorMatrix, tau: float,
                        cfg: SolverConfig = DEFAULT_CONFIG) -> complex:
    """Single-delay two-time correlator; asserts the imaginary residual."""
    value = two_time_correlator_grid(liouvillian, rho_ss, c, np.array([float(tau)]), cfg)[0]
    if abs(value.imag) > IMAG_RESIDUAL_TOL:
        raise ConvergenceFailure(
            f"two-time correlator has imaginary residual {value.imag:.3e}"
        )
    return complex(value)
