"""Release acceptance suite: one test and one printed PASS/FAIL line per criterion.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion
lines.  Everything runs at n_max = 5 (state dimension 21, generator
441 x 441) unless a criterion says otherwise; the whole suite takes a
few minutes on one machine.

Known red: criterion 5's late-delay band.  The delayed correlation at
the interference optimum follows 1 - 2 e^(-kappa tau/2) cos(2 J tau)
+ e^(-kappa tau) to a few parts in 1e4, so with kappa = 2 pi x 100 MHz
its swing at tau = 10 ns (kappa tau = 2 pi) is still 2 e^(-pi) = 8.6%,
and the required [0.95, 1.05] band is only reached near 12 ns.  The
check is kept as stated rather than loosened; see the assertion message
for the measured numbers.
"""

import numpy as np
import pytest

import photonmol as pm
from photonmol.cli import main as cli_main
from photonmol.observables import dominant_period
from photonmol.solvers import SolverConfig, _vec

from conftest import random_hermitian

EPS = 0.01


def report(criterion: str, ok: bool, detail: str) -> bool:
    print(f"\ncriterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


def g2_point(delta, j, u, mode="plus", n_max=5):
    params = pm.SystemParams.symmetric(delta=delta, j=j, u=u, epsilon=EPS)
    basis = pm.build_basis(n_max)
    liou = pm.build_liouvillian(params, pm.hamiltonian_normal(params, basis), basis)
    rho = pm.steady_state(liou)
    ladder = pm.annihilation_plus(basis) if mode == "plus" else pm.annihilation_minus(basis)
    return pm.g2_zero(rho, ladder)


def g2_curve(n_max=5, tau_max=4.0 * np.pi):
    j = 5.0
    params = pm.SystemParams.symmetric(delta=-j, j=j, u=0.05, epsilon=EPS)
    basis = pm.build_basis(n_max)
    liou = pm.build_liouvillian(params, pm.hamiltonian_normal(params, basis), basis)
    rho = pm.steady_state(liou)
    period = 2.0 * np.pi / (2.0 * j)
    count = int(np.ceil(tau_max / (period / 50.0))) + 1
    tau = np.linspace(0.0, tau_max, count)
    result = pm.g2_tau(liou, rho, pm.annihilation_plus(basis), tau)
    return tau, result.g2_values, period


def grid_minimum(mode, delta_lo, delta_hi, u_lo, u_hi):
    deltas = np.linspace(delta_lo, delta_hi, 21)
    us = np.linspace(u_lo, u_hi, 16)
    values = np.array([[g2_point(d, 20.0, u, mode) for u in us] for d in deltas])
    i, k = np.unravel_index(np.argmin(values), values.shape)
    return (deltas[i], us[k]), (deltas[1] - deltas[0], us[1] - us[0])


def test_criterion_1_plus_mode_optimum_recovery():
    """Grid-minimizing the symmetric-mode g2(0) recovers (-J, kappa^2/4J)."""
    (d_min, u_min), (d_step, u_step) = grid_minimum("plus", -25.0, -15.0, 0.005, 0.02)
    ok = abs(d_min + 20.0) <= d_step + 1e-12 and abs(u_min - 0.0125) <= u_step + 1e-12
    assert report("1", ok, f"minimizer at (delta={d_min:g}, u={u_min:g}), "
                           f"target (-20, 0.0125), steps ({d_step:g}, {u_step:g})")


def test_criterion_2_minus_mode_optimum_recovery():
    (d_min, u_min), (d_step, u_step) = grid_minimum("minus", 15.0, 25.0, -0.02, -0.005)
    ok = abs(d_min - 20.0) <= d_step + 1e-12 and abs(u_min + 0.0125) <= u_step + 1e-12
    assert report("2", ok, f"minimizer at (delta={d_min:g}, u={u_min:g}), "
                           f"target (20, -0.0125), steps ({d_step:g}, {u_step:g})")


def test_criterion_3_kerr_window_shape():
    """Antibunching exactly for 0 < u/(kappa^2/J) < 1/2, deepest at 1/4."""
    j = 20.0
    u_norm = np.linspace(-1.0, 1.0, 101)
    values = np.array([g2_point(-j, j, un / j) for un in u_norm])
    interior = (u_norm > 1e-12) & (u_norm < 0.5 - 1e-12)
    exterior = (u_norm < -1e-12) | (u_norm > 0.5 + 1e-12)
    step = u_norm[1] - u_norm[0]
    min_at = u_norm[int(np.argmin(values))]
    ok = (np.all(values[interior] < 1.0)
          and np.all(values[exterior] >= 1.0)
          and abs(min_at - 0.25) <= step + 1e-12)
    assert report("3", ok, f"window ({np.all(values[interior] < 1.0)}, "
                           f"{np.all(values[exterior] >= 1.0)}), "
                           f"minimum at u/(kappa^2/J)={min_at:g} (step {step:g})")


def test_criterion_4_optimal_detuning_tracks_coupling():
    details = []
    ok = True
    for j in (10.0, 20.0, 30.0):
        u_opt = 1.0 / (4.0 * j)
        deltas = np.linspace(-1.5 * j, -0.5 * j, 41)
        values = np.array([g2_point(d, j, u_opt) for d in deltas])
        d_min = deltas[int(np.argmin(values))]
        step = deltas[1] - deltas[0]
        ok = ok and abs(d_min + j) <= step + 1e-12
        details.append(f"J={j:g}: min at delta={d_min:g} (step {step:g})")
    assert report("4", ok, "; ".join(details))


def test_criterion_5_delayed_g2_dynamics():
    """Oscillation period 2 pi/(2J); band [0.95, 1.05] past 10 ns at 2pi x 100 MHz.

    The band clause is physically out of reach (module docstring); it is
    asserted anyway, unweakened.
    """
    kappa_abs = 2.0 * np.pi * 1.0e8  # 1/s
    tau, values, period = g2_curve()
    window = tau <= 10.0 * period
    measured = dominant_period(tau[window], values[window])
    period_ok = abs(measured - period) / period <= 0.05

    late = tau >= 10e-9 * kappa_abs  # tau >= 10 ns
    band_lo, band_hi = values[late].min(), values[late].max()
    band_ok = band_lo >= 0.95 and band_hi <= 1.05

    detail = (f"period {measured:.4g} vs {period:.4g} "
              f"({'ok' if period_ok else 'off'}); "
              f"g2 on tau >= 10 ns spans [{band_lo:.4f}, {band_hi:.4f}] "
              f"({'inside' if band_ok else 'outside'} [0.95, 1.05])")
    assert report("5", period_ok and band_ok, detail)


def test_criterion_6_analytic_oracle_equivalence():
    """Master-equation g2(0) vs the independent weak-drive model, within 5%."""
    worst = 0.0
    worst_at = None
    checked = 0
    for j in (5.0, 10.0, 20.0, 30.0):
        basis = pm.build_basis(5)
        cp, cm = pm.annihilation_plus(basis), pm.annihilation_minus(basis)
        for delta in np.linspace(-2.0 * j, 2.0 * j, 9):
            for u in np.linspace(-1.0, 1.0, 9):
                params = pm.SystemParams.symmetric(delta=float(delta), j=j,
                                                   u=float(u), epsilon=EPS)
                liou = pm.build_liouvillian(
                    params, pm.hamiltonian_normal(params, basis), basis)
                rho = pm.steady_state(liou)
                amps = pm.solve_amplitudes(params) if u != 0.0 else None
                for mode, ladder in (("plus", cp), ("minus", cm)):
                    numeric = pm.g2_zero(rho, ladder)
                    analytic = (pm.analytic_g2_zero(amps, mode)
                                if amps is not None else 1.0)
                    if not (1e-3 <= numeric <= 1e3 and 1e-3 <= analytic <= 1e3):
                        continue
                    checked += 1
                    rel = abs(numeric - analytic) / analytic
                    if rel > worst:
                        worst, worst_at = rel, (j, float(delta), float(u), mode)
    ok = worst <= 0.05 and checked > 300
    assert report("6", ok, f"{checked} grid points, worst deviation "
                           f"{worst:.2e} at {worst_at}")


def test_criterion_7_exact_algebraic_identities():
    rng = np.random.default_rng(23)
    worst_residual = 0.0
    for _ in range(50):
        j = float(rng.uniform(1.0, 100.0))
        for mode in ("plus", "minus"):
            opt = pm.optimal_conditions(mode, j, 1.0)
            params = pm.SystemParams.symmetric(delta=opt.delta_opt, j=j,
                                               u=opt.u_opt, epsilon=EPS)
            worst_residual = max(worst_residual,
                                 abs(pm.optimality_residual(params, mode)))
    opt = pm.optimal_conditions("plus", 20.0, 1.0)
    amps = pm.solve_amplitudes(pm.SystemParams.symmetric(
        delta=opt.delta_opt, j=20.0, u=opt.u_opt, epsilon=EPS))
    pair_ratio = abs(amps.c20) / abs(amps.c02)
    ok = worst_residual <= 1e-12 and pair_ratio <= 1e-10
    assert report("7", ok, f"max |residual at optimum| = {worst_residual:.2e}, "
                           f"|C20|/|C02| at optimum = {pair_ratio:.2e}")


def test_criterion_8_structural_invariants():
    checks = {}

    # Hamiltonian assemblies agree over the same basis
    rng = np.random.default_rng(29)
    worst = 0.0
    for _ in range(5):
        params = pm.SystemParams.symmetric(
            delta=float(rng.uniform(-30, 30)), j=float(rng.uniform(0, 30)),
            u=float(rng.uniform(-1, 1)), epsilon=float(rng.uniform(0, 0.1)))
        basis = pm.build_basis(int(rng.integers(2, 6)))
        h_l = pm.hamiltonian_local(params, basis).mat
        h_n = pm.hamiltonian_normal(params, basis).mat
        worst = max(worst, np.abs(h_l - h_n).max() / np.abs(h_n).max())
    checks["hamiltonian equivalence"] = worst <= 1e-12

    # trace preservation over 100 random Hermitian inputs
    canon = pm.SystemParams.symmetric(delta=-20.0, j=20.0, u=0.0125, epsilon=EPS)
    basis = pm.build_basis(5)
    liou = pm.build_liouvillian(canon, pm.hamiltonian_normal(canon, basis), basis)
    worst_tr = 0.0
    for _ in range(100):
        rho = random_hermitian(rng, basis.dim)
        out = (liou.matrix.mat @ _vec(rho)).reshape(basis.dim, basis.dim).T
        worst_tr = max(worst_tr, abs(np.trace(out)))
    checks["trace preservation"] = worst_tr <= 1e-12

    # steady-state residual, positivity, and method cross-check
    rho_ss = pm.steady_state(liou)
    residual = np.abs(liou.matrix.mat @ _vec(rho_ss.mat)).max()
    checks["steady residual"] = residual <= 1e-10
    checks["steady positivity"] = np.linalg.eigvalsh(rho_ss.mat).min() >= -1e-8
    rho_eig = pm.steady_state(liou, SolverConfig(steady_method="null-space"))
    checks["method agreement"] = np.abs(rho_ss.mat - rho_eig.mat).max() <= 1e-8

    # linear system is Poissonian
    lin = pm.SystemParams.symmetric(delta=-20.0, j=20.0, u=0.0, epsilon=EPS)
    liou_lin = pm.build_liouvillian(lin, pm.hamiltonian_normal(lin, basis), basis)
    rho_lin = pm.steady_state(liou_lin)
    g2p = pm.g2_zero(rho_lin, pm.annihilation_plus(basis))
    g2m = pm.g2_zero(rho_lin, pm.annihilation_minus(basis))
    checks["coherent g2 = 1"] = abs(g2p - 1.0) <= 1e-6 and abs(g2m - 1.0) <= 1e-6

    ok = all(checks.values())
    assert report("8", ok, ", ".join(f"{k}: {'ok' if v else 'BAD'}"
                                     for k, v in checks.items()))


def test_criterion_9_truncation_convergence():
    """Headline values of criteria 1-5 move by < 1% when n_max goes 5 -> 7."""
    points = {
        "c1 dip": (-20.0, 20.0, 0.0125, "plus"),
        "c2 dip": (20.0, 20.0, -0.0125, "minus"),
        "c3 scan point": (-20.0, 20.0, 0.02, "plus"),
        "c4 J=10": (-10.0, 10.0, 0.025, "plus"),
        "c4 J=30": (-30.0, 30.0, 1.0 / 120.0, "plus"),
    }
    changes = {}
    for name, (delta, j, u, mode) in points.items():
        v5 = g2_point(delta, j, u, mode, n_max=5)
        v7 = g2_point(delta, j, u, mode, n_max=7)
        changes[name] = abs(v7 - v5) / abs(v5)

    tau5, val5, period = g2_curve(n_max=5)
    tau7, val7, _ = g2_curve(n_max=7)
    window = tau5 <= 10.0 * period
    p5 = dominant_period(tau5[window], val5[window])
    p7 = dominant_period(tau7[window], val7[window])
    changes["c5 period"] = abs(p7 - p5) / p5
    late = tau5 >= 2.0 * np.pi
    m5 = np.abs(val5[late] - 1.0).max()
    m7 = np.abs(val7[late] - 1.0).max()
    changes["c5 late margin"] = abs(m7 - m5) / m5

    ok = all(change < 0.01 for change in changes.values())
    assert report("9", ok, ", ".join(f"{k}: {v:.2e}" for k, v in changes.items()))


def test_criterion_10_figure_determinism(tmp_path):
    """Byte-identical pre-baked scan output across repeat runs and thread counts.

    Resolution-reduced (--points) so the check runs in seconds; the code
    path is the full figure pipeline either way.
    """
    blobs = []
    for tag, threads in (("a", "1"), ("b", "3"), ("c", "1")):
        stem = tmp_path / f"f4_{tag}"
        code = cli_main(["figure", "4", "--points", "11", "--threads", threads,
                         "--out", str(stem)])
        assert code == 0
        blobs.append((stem.with_name(stem.name + "_plus.csv").read_bytes(),
                      stem.with_name(stem.name + "_minus.csv").read_bytes()))
    fig4_ok = blobs[0] == blobs[1] == blobs[2]

    tau_blobs = []
    for tag in ("a", "b"):
        stem = tmp_path / f"f7_{tag}"
        code = cli_main(["figure", "7", "--points", "201", "--out", str(stem)])
        assert code == 0
        tau_blobs.append(stem.with_suffix(".csv").read_bytes())
    fig7_ok = tau_blobs[0] == tau_blobs[1]

    ok = fig4_ok and fig7_ok
    assert report("10", ok, f"figure 4 identical: {fig4_ok}, "
                            f"figure 7 identical: {fig7_ok}")
