"""Parameter sweeps over the master-equation pipeline and CSV emission.

A sweep evaluates basis -> Hamiltonian -> Liouvillian -> steady state ->
observable over a 1-D or 2-D grid.  Grid points are independent and may
be evaluated by a thread pool; results are always gathered in row-major
axis order, so the output is bit-for-bit reproducible at any thread
count.  Failures never abort a sweep: each point carries an explicit
status and failed points leave their value cells empty in the CSV.
"""

from __future__ import annotations

import dataclasses
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import SimulationError, VacuumOccupation
from .fock import annihilation_minus, annihilation_plus, build_basis
from .model import SystemParams, build_liouvillian, hamiltonian_local, hamiltonian_normal
from .observables import g2_tau, g2_zero, occupations
from .solvers import DEFAULT_CONFIG, SolverConfig, steady_state

STATUS_OK = "ok"
STATUS_VACUUM = "vacuum-occupation"
STATUS_FAILURE = "solver-failure"

PARAMETER_AXES = (
    "delta", "delta_a", "delta_b", "j_coupling", "u_kerr",
    "epsilon", "kappa_a", "kappa_b",
)

SCALAR_OBSERVABLES = {
    "g2_plus_zero": ("g2_plus",),
    "g2_minus_zero": ("g2_minus",),
    "occupations": ("n_plus", "n_minus"),
}
TAU_OBSERVABLES = {
    "g2_plus_tau": ("g2_plus",),
    "g2_minus_tau": ("g2_minus",),
}

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepSpec:
    """Declarative description of a sweep.

    Axis names come from the SystemParams fields plus "delta" (which sets
    both detunings).  The pseudo-axis "tau" is reserved for the delayed
    correlation observables, which scan the delay at fixed parameters.
    kappa_hz optionally declares the absolute reference rate (ordinary
    frequency, Hz) so delay grids can also be emitted in seconds.
    """

    axis1: Axis
    axis2: Axis | None
    fixed: SystemParams
    observable: str
    n_max: int = 5
    kappa_hz: float | None = None

    def __post_init__(self):
        if self.observable in TAU_OBSERVABLES:
            if self.axis1.name != "tau":
                raise ValueError(
                    f"observable {self.observable!r} scans the delay; "
                    "axis1 must be named 'tau'"
                )
            if self.axis2 is not None:
                raise ValueError("delay scans take no second axis")
            if self.axis1.start != 0.0:
                raise ValueError("delay scans must start at tau = 0")
        elif self.observable in SCALAR_OBSERVABLES:
            axes = [self.axis1] + ([self.axis2] if self.axis2 else [])
            names = [ax.name for ax in axes]
            if len(set(names)) != len(names):
                raise ValueError("axes must name distinct parameters")
            for name in names:
                if name not in PARAMETER_AXES:
                    raise ValueError(
                        f"unknown axis parameter {name!r}; expected one of "
                        f"{PARAMETER_AXES}"
                    )
        else:
            known = sorted(set(SCALAR_OBSERVABLES) | set(TAU_OBSERVABLES))
            raise ValueError(f"unknown observable {self.observable!r}; expected one of {known}")
        for ax in (self.axis1, self.axis2):
            if ax is not None and ax.count < 2:
                raise ValueError(f"axis {ax.name!r} needs at least 2 points")
        if self.n_max < 0:
            raise ValueError("n_max must be >= 0")


@dataclass
class SweepResult:
    """Row-major grid of observable values with per-point statuses."""

    axis_names: tuple[str, ...]
    axis_grids: tuple[np.ndarray, ...]
    value_columns: tuple[str, ...]
    values: np.ndarray          # (n_points, n_columns); NaN where status != ok
    statuses: tuple[str, ...]   # one per grid point, row-major
    provenance: dict[str, str]
    extra_coords: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def n_points(self) -> int:
        return int(np.prod([len(g) for g in self.axis_grids]))

    def coordinates(self) -> np.ndarray:
        """Row-major (n_points, n_axes) coordinate table."""
        if not self.axis_grids:  # a single point has no axes
            return np.zeros((1, 0))
        mesh = np.meshgrid(*self.axis_grids, indexing="ij")
        return np.stack([m.reshape(-1) for m in mesh], axis=1)

    def check(self) -> "SweepResult":
        if len(self.statuses) != self.n_points or self.values.shape[0] != self.n_points:
            raise ValueError("inconsistent grid sizes in sweep result")
        ok = np.array([s == STATUS_OK for s in self.statuses])
        finite = np.isfinite(self.values).all(axis=1)
        if np.any(ok & ~finite):
            raise ValueError("non-finite value on an ok grid point")
        if np.any(~ok & finite):
            raise ValueError("finite value on a failed grid point")
        return self


def apply_axis_values(base: SystemParams, assignments: dict[str, float]) -> SystemParams:
    """Return params with the given axis values substituted in."""
    updates: dict[str, float] = {}
    for name, value in assignments.items():
        if name == "delta":
            updates["delta_a"] = value
            updates["delta_b"] = value
        else:
            updates[name] = value
    return dataclasses.replace(base, **updates)


def _pipeline_steady(params: SystemParams, n_max: int, cfg: SolverConfig):
    basis = build_basis(n_max)
    if params.equal_detunings:
        h = hamiltonian_normal(params, basis)
    else:
        h = hamiltonian_local(params, basis)
    liouvillian = build_liouvillian(params, h, basis)
    return basis, liouvillian, steady_state(liouvillian, cfg)


def run_point(params: SystemParams, n_max: int, observable: str,
              cfg: SolverConfig = DEFAULT_CONFIG) -> tuple[tuple[float, ...] | None, str]:
    """Evaluate one scalar observable; errors become statuses, not raises."""
    if observable not in SCALAR_OBSERVABLES:
        raise ValueError(
            f"run_point handles {sorted(SCALAR_OBSERVABLES)}, got {observable!r}"
        )
    try:
        basis, _, rho_ss = _pipeline_steady(params, n_max, cfg)
        if observable == "g2_plus_zero":
            value = (g2_zero(rho_ss, annihilation_plus(basis)),)
        elif observable == "g2_minus_zero":
            value = (g2_zero(rho_ss, annihilation_minus(basis)),)
        else:
            value = occupations(rho_ss, basis)
    except VacuumOccupation:
        return None, STATUS_VACUUM
    except (SimulationError, ValueError, np.linalg.LinAlgError):
        return None, STATUS_FAILURE
    return value, STATUS_OK


def _provenance(spec: SweepSpec, cfg: SolverConfig) -> dict[str, str]:
    prov = {
        "generator": f"photonmol {__version__}",
        "observable": spec.observable,
        "n_max": str(spec.n_max),
        "steady_method": cfg.steady_method,
        "propagator": cfg.propagator,
        "rtol": f"{cfg.rtol:.3e}",
        "atol": f"{cfg.atol:.3e}",
    }
    for fld in dataclasses.fields(SystemParams):
        prov[fld.name] = f"{getattr(spec.fixed, fld.name):.12g}"
    axes = [spec.axis1] + ([spec.axis2] if spec.axis2 else [])
    for i, ax in enumerate(axes, start=1):
        prov[f"axis{i}"] = f"{ax.name}:{ax.start:.12g}:{ax.stop:.12g}:{ax.count}"
    if spec.kappa_hz is not None:
        prov["kappa_hz"] = f"{spec.kappa_hz:.12g}"
    return prov


def _run_tau_sweep(spec: SweepSpec, cfg: SolverConfig) -> SweepResult:
    tau_grid = spec.axis1.grid()
    columns = TAU_OBSERVABLES[spec.observable]
    n = len(tau_grid)
    try:
        basis, liouvillian, rho_ss = _pipeline_steady(spec.fixed, spec.n_max, cfg)
        ladder = annihilation_plus(basis) if spec.observable == "g2_plus_tau" \
            else annihilation_minus(basis)
        mode = "plus" if spec.observable == "g2_plus_tau" else "minus"
        corr = g2_tau(liouvillian, rho_ss, ladder, tau_grid, cfg, mode=mode)
        values = corr.g2_values.reshape(n, 1)
        statuses = tuple([STATUS_OK] * n)
    except VacuumOccupation:
        values = np.full((n, 1), np.nan)
        statuses = tuple([STATUS_VACUUM] * n)
    except (SimulationError, ValueError, np.linalg.LinAlgError):
        values = np.full((n, 1), np.nan)
        statuses = tuple([STATUS_FAILURE] * n)

    extra = {}
    if spec.kappa_hz is not None:
        extra["tau_s"] = tau_grid / (TWO_PI * spec.kappa_hz)
    return SweepResult(
        axis_names=("tau",),
        axis_grids=(tau_grid,),
        value_columns=columns,
        values=values,
        statuses=statuses,
        provenance=_provenance(spec, cfg),
        extra_coords=extra,
    ).check()


def run_sweep(spec: SweepSpec, cfg: SolverConfig = DEFAULT_CONFIG,
              threads: int = 1) -> SweepResult:
    """Evaluate the sweep grid; deterministic row-major output ordering."""
    if spec.observable in TAU_OBSERVABLES:
        return _run_tau_sweep(spec, cfg)

    columns = SCALAR_OBSERVABLES[spec.observable]
    axes = [spec.axis1] + ([spec.axis2] if spec.axis2 else [])
    grids = [ax.grid() for ax in axes]
    mesh = np.meshgrid(*grids, indexing="ij")
    coords = np.stack([m.reshape(-1) for m in mesh], axis=1)
    n_points = coords.shape[0]

    def one(i: int):
        assignments = {ax.name: float(coords[i, k]) for k, ax in enumerate(axes)}
        params = apply_axis_values(spec.fixed, assignments)
        return run_point(params, spec.n_max, spec.observable, cfg)

    results: list[tuple[tuple[float, ...] | None, str]] = [None] * n_points  # type: ignore
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for i, res in enumerate(pool.map(one, range(n_points))):
                results[i] = res
    else:
        for i in range(n_points):
            results[i] = one(i)

    values = np.full((n_points, len(columns)), np.nan)
    statuses = []
    for i, (value, status) in enumerate(results):
        statuses.append(status)
        if value is not None:
            values[i, :] = value
    return SweepResult(
        axis_names=tuple(ax.name for ax in axes),
        axis_grids=tuple(grids),
        value_columns=columns,
        values=values,
        statuses=tuple(statuses),
        provenance=_provenance(spec, cfg),
    ).check()


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def emit_csv(result: SweepResult, destination) -> None:
    """Write a sweep result as CSV with a commented provenance header.

    Layout: '# key=value' provenance lines, a column-name header, then
    one row per grid point (row-major).  Value cells are empty on non-ok
    points; the trailing column is the status string.  All numbers carry
    12 significant digits and rows end in a single newline, so identical
    results serialize byte-identically.
    """
    result.check()
    own = isinstance(destination, (str, bytes)) or hasattr(destination, "__fspath__")
    stream = open(destination, "w", newline="") if own else destination
    try:
        for key in sorted(result.provenance):
            stream.write(f"# {key}={result.provenance[key]}\n")
        extra_names = tuple(sorted(result.extra_coords))
        header = result.axis_names + extra_names + result.value_columns + ("status",)
        stream.write(",".join(header) + "\n")
        coords = result.coordinates()
        for i in range(result.n_points):
            cells = [_fmt(c) for c in coords[i]]
            cells += [_fmt(result.extra_coords[name][i]) for name in extra_names]
            if result.statuses[i] == STATUS_OK:
                cells += [_fmt(v) for v in result.values[i]]
            else:
                cells += [""] * len(result.value_columns)
            cells.append(result.statuses[i])
            stream.write(",".join(cells) + "\n")
    finally:
        if own:
            stream.close()


def emit_csv_string(result: SweepResult) -> str:
    buf = io.StringIO()
    emit_csv(result, buf)
    return buf.getvalue()
