"""Pre-baked sweep layouts: the standard demonstration scans of the model.

Each entry reproduces one of the canonical data sets for the J = 20 kappa
photonic molecule at weak drive (eps = 0.01 kappa): 2-D antibunching maps
over (delta, u), detuning scans at the optimal Kerr strength, the Kerr
scan through the antibunching window, the (u, j) map along delta = -j,
the j-dependence of the optimal detuning, and the delayed g2 trace for
realistic microtoroid numbers (kappa = 2 pi x 100 MHz, j = 5 kappa).

2-D maps default to 201 x 201 grids (a documented choice; the resolution
is overridable).  Values are always emitted linearly; log-scale display
is left to plotting scripts.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .analytic import optimal_conditions
from .model import SystemParams
from .solvers import DEFAULT_CONFIG, SolverConfig
from .sweep import (
    STATUS_FAILURE,
    STATUS_OK,
    STATUS_VACUUM,
    Axis,
    SweepResult,
    SweepSpec,
    apply_axis_values,
    run_point,
    run_sweep,
)

FIGURE_NAMES = ("2", "3a", "3b", "4", "5", "6", "7")

_EPS = 0.01
_J = 20.0
_U_OPT = 0.0125  # kappa^2/(4 J) at J = 20 kappa

# kappa = 2 pi x 100 MHz: the reference linewidth for the absolute-time trace
KAPPA_HZ_DEFAULT = 1.0e8


def _base(delta: float, j: float, u: float) -> SystemParams:
    return SystemParams.symmetric(delta=delta, j=j, u=u, epsilon=_EPS, kappa=1.0)


def default_tau_axis(j: float, tau_max: float, oversample: int = 50) -> Axis:
    """Delay axis resolving the expected 2J beat with >= oversample points per period."""
    period = 2.0 * math.pi / (2.0 * j) if j > 0 else tau_max
    count = max(int(math.ceil(tau_max / (period / oversample))) + 1, 51)
    return Axis("tau", 0.0, tau_max, count)


def figure_results(name: str, points: int | None = None, n_max: int = 5,
                   threads: int = 1, kappa_hz: float | None = None,
                   cfg: SolverConfig = DEFAULT_CONFIG) -> list[tuple[str, SweepResult]]:
    """Run the named pre-baked layout; returns (label, result) pairs.

    Multi-panel layouts return one result per panel/curve.  ``points``
    overrides the per-axis grid resolution (useful for smoke tests; the
    full 201-point 2-D maps take minutes).
    """
    if name not in FIGURE_NAMES:
        raise ValueError(f"unknown figure {name!r}; expected one of {FIGURE_NAMES}")
    n2d = points or 201
    n1d = points or 201

    if name == "2":
        fixed = _base(delta=0.0, j=_J, u=0.0)
        axes = (Axis("delta", -40.0, 40.0, n2d), Axis("u_kerr", -0.05, 0.05, n2d))
        out = []
        for label, obs in (("plus", "g2_plus_zero"), ("minus", "g2_minus_zero")):
            spec = SweepSpec(axes[0], axes[1], fixed, obs, n_max=n_max)
            out.append((label, run_sweep(spec, cfg, threads)))
        return out

    if name in ("3a", "3b"):
        u = _U_OPT if name == "3a" else -_U_OPT
        fixed = _base(delta=0.0, j=_J, u=u)
        axis = Axis("delta", -40.0, 40.0, n1d)
        out = []
        for label, obs in (("plus", "g2_plus_zero"), ("minus", "g2_minus_zero")):
            spec = SweepSpec(axis, None, fixed, obs, n_max=n_max)
            out.append((label, run_sweep(spec, cfg, threads)))
        return out

    if name == "4":
        count = points or 101
        u_scale = 1.0 / _J  # kappa^2/J in kappa units
        axis = Axis("u_kerr", -u_scale, u_scale, count)
        out = []
        for label, delta, obs in (
            ("plus", -_J, "g2_plus_zero"),
            ("minus", _J, "g2_minus_zero"),
        ):
            spec = SweepSpec(axis, None, _base(delta, _J, 0.0), obs, n_max=n_max)
            out.append((label, run_sweep(spec, cfg, threads)))
        return out

    if name == "5":
        return [("plus", _figure5_map(n2d, n_max, threads, cfg))]

    if name == "6":
        count = points or 201
        out = []
        for j in (30.0, 20.0, 10.0):
            u_opt = optimal_conditions("plus", j, 1.0).u_opt
            axis = Axis("delta", -1.5 * j, -0.5 * j, count)
            spec = SweepSpec(axis, None, _base(0.0, j, u_opt), "g2_plus_zero", n_max=n_max)
            out.append((f"j{j:g}", run_sweep(spec, cfg, threads)))
        return out

    # name == "7": delayed g2 of the symmetric mode at realistic rates
    j = 5.0
    fixed = _base(delta=-j, j=j, u=0.05)
    tau_axis = default_tau_axis(j, tau_max=4.0 * math.pi)
    if points:
        tau_axis = Axis("tau", 0.0, tau_axis.stop, points)
    spec = SweepSpec(tau_axis, None, fixed, "g2_plus_tau", n_max=n_max,
                     kappa_hz=kappa_hz if kappa_hz is not None else KAPPA_HZ_DEFAULT)
    return [("plus", run_sweep(spec, cfg, threads))]


def _figure5_map(count: int, n_max: int, threads: int,
                 cfg: SolverConfig) -> SweepResult:
    """(u, j) map of g2+(0) with the detuning locked to delta = -j per point.

    The linkage between an axis value and a fixed parameter is outside
    what SweepSpec expresses, so this map drives run_point directly and
    assembles the result grid by hand (same row-major ordering).
    """
    u_grid = np.linspace(0.001, 0.05, count)
    j_grid = np.linspace(2.0, 40.0, count)
    base = _base(delta=0.0, j=_J, u=0.0)
    pairs = [(u, j) for u in u_grid for j in j_grid]

    def one(pair):
        u, j = pair
        params = apply_axis_values(base, {"delta": -j, "j_coupling": j, "u_kerr": u})
        return run_point(params, n_max, "g2_plus_zero", cfg)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, pairs))
    else:
        results = [one(p) for p in pairs]

    values = np.full((len(pairs), 1), np.nan)
    statuses = []
    for i, (value, status) in enumerate(results):
        statuses.append(status)
        if value is not None:
            values[i, 0] = value[0]

    prov = {
        "generator": f"photonmol {__version__}",
        "observable": "g2_plus_zero",
        "n_max": str(n_max),
        "steady_method": cfg.steady_method,
        "propagator": cfg.propagator,
        "rtol": f"{cfg.rtol:.3e}",
        "atol": f"{cfg.atol:.3e}",
        "constraint": "delta=-j_coupling",
        "epsilon": f"{base.epsilon:.12g}",
        "kappa_a": "1",
        "kappa_b": "1",
        "axis1": f"u_kerr:{u_grid[0]:.12g}:{u_grid[-1]:.12g}:{count}",
        "axis2": f"j_coupling:{j_grid[0]:.12g}:{j_grid[-1]:.12g}:{count}",
    }
    return SweepResult(
        axis_names=("u_kerr", "j_coupling"),
        axis_grids=(u_grid, j_grid),
        value_columns=("g2_plus",),
        values=values,
        statuses=tuple(statuses),
        provenance=prov,
    ).check()
