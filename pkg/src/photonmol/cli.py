"""Command-line front end.

Subcommands: point, sweep, g2tau, optimal, figure.  All physics is in
kappa-normalized units; --kappa-hz optionally anchors the reference rate
(ordinary frequency in Hz, multiplied by 2 pi internally) so delay grids
are also written in seconds.  A flat key=value config file can predefine
any flag; explicit flags win.  Exit codes: 0 full success, 2 when any
grid point carries a non-ok status, 1 on hard failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import SimulationError
from .analytic import optimal_conditions
from .figures import FIGURE_NAMES, KAPPA_HZ_DEFAULT, default_tau_axis, figure_results
from .model import SystemParams
from .solvers import SolverConfig
from .sweep import (
    STATUS_OK,
    Axis,
    SweepResult,
    SweepSpec,
    emit_csv,
    run_point,
    run_sweep,
)


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage problems are hard failures (exit 1), not grid-status failures
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


_PARAM_DEFAULTS = {
    "delta": None,
    "delta_a": None,
    "delta_b": None,
    "j": 20.0,
    "u": 0.0,
    "epsilon": 0.01,
    "kappa_a": 1.0,
    "kappa_b": 1.0,
}

_FLOAT_KEYS = {
    "delta", "delta_a", "delta_b", "j", "u", "epsilon", "kappa_a", "kappa_b",
    "kappa", "tau_max", "kappa_hz",
}
_INT_KEYS = {"n_max", "tau_steps", "threads", "points"}
_STRING_KEYS = {"mode", "observable", "out", "axis1", "axis2"}
_KNOWN_KEYS = _FLOAT_KEYS | _INT_KEYS | _STRING_KEYS


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--delta", type=float, help="detuning, sets both cavities")
    parser.add_argument("--delta-a", type=float, dest="delta_a")
    parser.add_argument("--delta-b", type=float, dest="delta_b")
    parser.add_argument("--j", type=float, help="intercavity coupling J")
    parser.add_argument("--u", type=float, help="Kerr interaction U")
    parser.add_argument("--epsilon", type=float, help="drive Rabi frequency")
    parser.add_argument("--kappa-a", type=float, dest="kappa_a")
    parser.add_argument("--kappa-b", type=float, dest="kappa_b")
    parser.add_argument("--n-max", type=int, dest="n_max", help="total-photon truncation")
    parser.add_argument("--config", type=str, help="flat key=value config file")


def build_parser() -> _Parser:
    parser = _Parser(prog="photonmol", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_point = sub.add_parser("point", parents=[], help="single steady-state evaluation")
    _add_param_flags(p_point)
    p_point.add_argument("--observable",
                         choices=["g2_plus_zero", "g2_minus_zero", "occupations"])
    p_point.add_argument("--out", type=str, help="optional CSV destination")

    p_sweep = sub.add_parser("sweep", help="1-D/2-D parameter sweep to CSV")
    _add_param_flags(p_sweep)
    p_sweep.add_argument("--axis1", type=str, help="name:start:stop:count")
    p_sweep.add_argument("--axis2", type=str, help="name:start:stop:count")
    p_sweep.add_argument("--observable",
                         choices=["g2_plus_zero", "g2_minus_zero", "occupations"])
    p_sweep.add_argument("--threads", type=int, help="worker threads (default 1)")
    p_sweep.add_argument("--out", type=str, help="CSV destination (default sweep.csv)")

    p_tau = sub.add_parser("g2tau", help="delayed g2 scan to CSV")
    _add_param_flags(p_tau)
    p_tau.add_argument("--mode", choices=["plus", "minus"])
    p_tau.add_argument("--tau-max", type=float, dest="tau_max",
                       help="largest delay in rate units (default 4 pi)")
    p_tau.add_argument("--tau-steps", type=int, dest="tau_steps",
                       help="grid points (default resolves the 2J beat)")
    p_tau.add_argument("--kappa-hz", type=float, dest="kappa_hz",
                       help="reference rate in Hz; adds a tau_s column")
    p_tau.add_argument("--out", type=str, help="CSV destination (default g2tau.csv)")

    p_opt = sub.add_parser("optimal", help="closed-form optimal antibunching point")
    p_opt.add_argument("--mode", default="plus", choices=["plus", "minus"])
    p_opt.add_argument("--j", type=float, default=20.0)
    p_opt.add_argument("--kappa", type=float, default=1.0)
    p_opt.add_argument("--config", type=str)

    p_fig = sub.add_parser("figure", help="pre-baked demonstration scans")
    p_fig.add_argument("name", choices=list(FIGURE_NAMES))
    p_fig.add_argument("--points", type=int, help="override per-axis grid resolution")
    p_fig.add_argument("--n-max", type=int, dest="n_max")
    p_fig.add_argument("--threads", type=int)
    p_fig.add_argument("--kappa-hz", type=float, dest="kappa_hz")
    p_fig.add_argument("--out", type=str, help="output stem (default figure<name>)")
    p_fig.add_argument("--config", type=str)

    return parser


def load_config(path: str) -> dict:
    """Flat key=value file; '#' starts a comment, blank lines are skipped."""
    values = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _KNOWN_KEYS:
            raise CliError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            if key in _FLOAT_KEYS:
                values[key] = float(value)
            elif key in _INT_KEYS:
                values[key] = int(value)
            else:
                values[key] = value
        except ValueError as exc:
            raise CliError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return values


def _setting(args, config: dict, key: str, builtin=None):
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if key in config:
        return config[key]
    return builtin


def resolve_params(args, config: dict) -> SystemParams:
    get = lambda key, builtin=None: _setting(args, config, key, builtin)
    delta = get("delta")
    delta_a, delta_b = get("delta_a"), get("delta_b")
    if delta is not None and (getattr(args, "delta_a", None) is not None
                              or getattr(args, "delta_b", None) is not None):
        raise CliError("--delta conflicts with --delta-a/--delta-b")
    if delta is not None:
        delta_a = delta_b = delta
    try:
        return SystemParams(
            delta_a=delta_a if delta_a is not None else 0.0,
            delta_b=delta_b if delta_b is not None else 0.0,
            j_coupling=get("j", _PARAM_DEFAULTS["j"]),
            u_kerr=get("u", _PARAM_DEFAULTS["u"]),
            epsilon=get("epsilon", _PARAM_DEFAULTS["epsilon"]),
            kappa_a=get("kappa_a", _PARAM_DEFAULTS["kappa_a"]),
            kappa_b=get("kappa_b", _PARAM_DEFAULTS["kappa_b"]),
        )
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _parse_axis(text: str) -> Axis:
    parts = text.split(":")
    if len(parts) != 4:
        raise CliError(f"axis must be name:start:stop:count, got {text!r}")
    name, start, stop, count = parts
    try:
        return Axis(name.replace("-", "_"), float(start), float(stop), int(count))
    except ValueError as exc:
        raise CliError(f"bad axis {text!r}: {exc}") from exc


def _status_exit(statuses) -> int:
    return 0 if all(s == STATUS_OK for s in statuses) else 2


def _cmd_point(args, config: dict) -> int:
    params = resolve_params(args, config)
    n_max = _setting(args, config, "n_max", 5)
    observable = _setting(args, config, "observable", "g2_plus_zero")
    if observable not in ("g2_plus_zero", "g2_minus_zero", "occupations"):
        raise CliError(f"point cannot evaluate {observable!r}")
    value, status = run_point(params, n_max, observable)
    if value is None:
        print(f"status={status}")
    else:
        names = {"g2_plus_zero": ("g2_plus",), "g2_minus_zero": ("g2_minus",),
                 "occupations": ("n_plus", "n_minus")}[observable]
        fields = " ".join(f"{n}={v:.12g}" for n, v in zip(names, value))
        print(f"{fields} status={status}")
    if args.out:
        result = SweepResult(
            axis_names=(), axis_grids=(),
            value_columns={"g2_plus_zero": ("g2_plus",),
                           "g2_minus_zero": ("g2_minus",),
                           "occupations": ("n_plus", "n_minus")}[observable],
            values=(np.array([value]) if value is not None
                    else np.full((1, 2 if observable == "occupations" else 1), np.nan)),
            statuses=(status,),
            provenance=_point_provenance(params, n_max, observable),
        )
        emit_csv(result, args.out)
    return _status_exit([status])


def _point_provenance(params: SystemParams, n_max: int, observable: str) -> dict:
    prov = {"generator": f"photonmol {__version__}", "observable": observable,
            "n_max": str(n_max)}
    for fld in dataclasses.fields(SystemParams):
        prov[fld.name] = f"{getattr(params, fld.name):.12g}"
    return prov


def _cmd_sweep(args, config: dict) -> int:
    params = resolve_params(args, config)
    axis1_text = _setting(args, config, "axis1")
    if axis1_text is None:
        raise CliError("sweep needs --axis1 name:start:stop:count")
    axis1 = _parse_axis(axis1_text)
    axis2_text = _setting(args, config, "axis2")
    axis2 = _parse_axis(axis2_text) if axis2_text else None
    try:
        spec = SweepSpec(axis1, axis2, params,
                         _setting(args, config, "observable", "g2_plus_zero"),
                         n_max=_setting(args, config, "n_max", 5))
        result = run_sweep(spec, threads=_setting(args, config, "threads", 1))
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    emit_csv(result, _setting(args, config, "out", "sweep.csv"))
    return _status_exit(result.statuses)


def _cmd_g2tau(args, config: dict) -> int:
    params = resolve_params(args, config)
    tau_max = _setting(args, config, "tau_max", 4.0 * math.pi)
    steps = _setting(args, config, "tau_steps")
    if steps is not None:
        axis = Axis("tau", 0.0, tau_max, steps)
    else:
        axis = default_tau_axis(params.j_coupling, tau_max)
    mode = _setting(args, config, "mode", "plus")
    if mode not in ("plus", "minus"):
        raise CliError(f"mode must be plus or minus, got {mode!r}")
    try:
        spec = SweepSpec(axis, None, params, f"g2_{mode}_tau",
                         n_max=_setting(args, config, "n_max", 5),
                         kappa_hz=_setting(args, config, "kappa_hz"))
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    result = run_sweep(spec)
    emit_csv(result, _setting(args, config, "out", "g2tau.csv"))
    return _status_exit(result.statuses)


def _cmd_optimal(args, config: dict) -> int:
    try:
        opt = optimal_conditions(args.mode,
                                 _setting(args, config, "j", 20.0),
                                 _setting(args, config, "kappa", 1.0))
    except (SimulationError, ValueError) as exc:
        raise CliError(str(exc)) from exc
    print(f"mode={opt.mode} delta_opt={opt.delta_opt:.12g} u_opt={opt.u_opt:.12g}")
    return 0


def _cmd_figure(args, config: dict) -> int:
    n_max = _setting(args, config, "n_max", 5)
    threads = _setting(args, config, "threads", 1)
    kappa_hz = _setting(args, config, "kappa_hz")
    if args.name == "7" and kappa_hz is None:
        kappa_hz = KAPPA_HZ_DEFAULT
    results = figure_results(args.name, points=_setting(args, config, "points"),
                             n_max=n_max, threads=threads, kappa_hz=kappa_hz)
    stem = _setting(args, config, "out", f"figure{args.name}")
    stem = str(stem)
    if stem.endswith(".csv"):
        stem = stem[:-4]
    statuses = []
    for label, result in results:
        path = f"{stem}_{label}.csv" if len(results) > 1 else f"{stem}.csv"
        emit_csv(result, path)
        print(f"wrote {path} ({result.n_points} points)")
        statuses.extend(result.statuses)
    return _status_exit(statuses)


_COMMANDS = {
    "point": _cmd_point,
    "sweep": _cmd_sweep,
    "g2tau": _cmd_g2tau,
    "optimal": _cmd_optimal,
    "figure": _cmd_figure,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config) if getattr(args, "config", None) else {}
        return _COMMANDS[args.command](args, config)
    except CliError as exc:
        print(f"photonmol: error: {exc}", file=sys.stderr)
        return 1
    except (SimulationError, ValueError) as exc:
        print(f"photonmol: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"photonmol: i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
