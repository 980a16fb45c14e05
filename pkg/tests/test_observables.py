import numpy as np
import pytest

import photonmol as pm
from photonmol.errors import VacuumOccupation
from photonmol.observables import _clamp_g2, dominant_period

FIG3A = pm.SystemParams.symmetric(delta=-20.0, j=20.0, u=0.0125, epsilon=0.01)
FIG7 = pm.SystemParams.symmetric(delta=-5.0, j=5.0, u=0.05, epsilon=0.01)

# pinned output of this solver at the plus-mode antibunching optimum
# (delta = -20, j = 20, u = 0.0125, eps = 0.01, n_max = 5); regression
# guard, not an externally published number
FIG3A_G2_PLUS = 5.012729897559275e-07


@pytest.mark.parametrize("delta,j", [(-20.0, 20.0), (3.0, 7.0)])
def test_linear_system_is_poissonian(pipeline, delta, j):
    params = pm.SystemParams.symmetric(delta=delta, j=j, u=0.0, epsilon=0.01)
    basis, _, rho = pipeline(params)
    assert abs(pm.g2_zero(rho, pm.annihilation_plus(basis)) - 1.0) <= 1e-6
    assert abs(pm.g2_zero(rho, pm.annihilation_minus(basis)) - 1.0) <= 1e-6


def test_antibunching_dip_regression(pipeline):
    basis, _, rho = pipeline(FIG3A)
    value = pm.g2_zero(rho, pm.annihilation_plus(basis))
    assert value < 1e-3  # deep antibunching
    assert value == pytest.approx(FIG3A_G2_PLUS, rel=1e-6)


def test_bunching_of_mirror_mode(pipeline):
    params = pm.SystemParams.symmetric(delta=20.0, j=20.0, u=0.0125, epsilon=0.01)
    basis, _, rho = pipeline(params)
    assert pm.g2_zero(rho, pm.annihilation_minus(basis)) > 1.0


def test_vacuum_occupation_is_an_error(pipeline):
    params = pm.SystemParams.symmetric(delta=0.0, j=5.0, u=0.1, epsilon=0.0)
    basis, liou, rho = pipeline(params, n_max=3)
    cp = pm.annihilation_plus(basis)
    with pytest.raises(VacuumOccupation):
        pm.g2_zero(rho, cp)
    with pytest.raises(VacuumOccupation):
        pm.g2_tau(liou, rho, cp, np.linspace(0.0, 1.0, 5))


def test_occupations_vacuum(pipeline):
    params = pm.SystemParams.symmetric(delta=0.0, j=5.0, u=0.1, epsilon=0.0)
    basis, _, rho = pipeline(params, n_max=3)
    n_plus, n_minus = pm.occupations(rho, basis)
    assert abs(n_plus) < 1e-14 and abs(n_minus) < 1e-14


def test_occupations_linear_response(pipeline):
    """U = 0, delta = -J: each mode is a driven damped oscillator.

    Drive eps/sqrt(2) per mode; plus mode detuned by delta - J = -2J,
    minus mode resonant, so n = (eps^2/2) / (detuning^2 + kappa^2/4).
    """
    eps, j, kappa = 0.01, 20.0, 1.0
    params = pm.SystemParams.symmetric(delta=-j, j=j, u=0.0, epsilon=eps, kappa=kappa)
    basis, _, rho = pipeline(params)
    n_plus, n_minus = pm.occupations(rho, basis)
    expected_plus = (eps**2 / 2.0) / (4.0 * j**2 + kappa**2 / 4.0)
    expected_minus = (eps**2 / 2.0) / (kappa**2 / 4.0)
    assert n_plus == pytest.approx(expected_plus, rel=1e-10)
    assert n_minus == pytest.approx(expected_minus, rel=1e-10)


def test_g2_tau_zero_entry_matches_equal_time(pipeline):
    basis, liou, rho = pipeline(FIG7)
    cp = pm.annihilation_plus(basis)
    result = pm.g2_tau(liou, rho, cp, np.linspace(0.0, 1.0, 11))
    assert abs(result.g2_values[0] - pm.g2_zero(rho, cp)) <= 1e-8
    assert result.mode == "plus"
    assert result.occupation > 0


def test_g2_tau_grid_validation(pipeline):
    basis, liou, rho = pipeline(FIG7)
    cp = pm.annihilation_plus(basis)
    with pytest.raises(ValueError):
        pm.g2_tau(liou, rho, cp, np.array([0.1, 0.2]))  # must start at 0
    with pytest.raises(ValueError):
        pm.g2_tau(liou, rho, cp, np.array([0.0, 0.2, 0.2]))  # strictly increasing


def test_mode_exchange_symmetry(pipeline):
    """u -> -u with delta -> -delta swaps the two normal modes."""
    rng = np.random.default_rng(5)
    for _ in range(3):
        delta = float(rng.uniform(-15, 15))
        j = float(rng.uniform(2, 20))
        u = float(rng.uniform(-0.3, 0.3))
        p_fwd = pm.SystemParams.symmetric(delta=delta, j=j, u=u, epsilon=0.01)
        p_rev = pm.SystemParams.symmetric(delta=-delta, j=j, u=-u, epsilon=0.01)
        basis, _, rho_fwd = pipeline(p_fwd)
        _, _, rho_rev = pipeline(p_rev)
        g2_fwd = pm.g2_zero(rho_fwd, pm.annihilation_plus(basis))
        g2_rev = pm.g2_zero(rho_rev, pm.annihilation_minus(basis))
        assert g2_fwd == pytest.approx(g2_rev, rel=1e-6)


def test_oscillation_period_of_delayed_g2(pipeline):
    basis, liou, rho = pipeline(FIG7)
    cp = pm.annihilation_plus(basis)
    period = 2.0 * np.pi / (2.0 * FIG7.j_coupling)
    tau_max = 10.0 * period
    tau = np.linspace(0.0, tau_max, 501)
    result = pm.g2_tau(liou, rho, cp, tau)
    measured = dominant_period(tau, result.g2_values)
    assert measured == pytest.approx(period, rel=0.05)


def test_delayed_g2_settles_to_unity(pipeline):
    basis, liou, rho = pipeline(FIG7)
    cp = pm.annihilation_plus(basis)
    tau = np.linspace(0.0, 20.0, 401)
    result = pm.g2_tau(liou, rho, cp, tau)
    assert abs(result.g2_values[-1] - 1.0) <= 0.02


def test_clamp_helper():
    values, clamped = _clamp_g2(np.array([0.5, -5e-11, 2.0]))
    assert values[1] == 0.0
    assert clamped == (1,)
    with pytest.raises(ValueError):
        _clamp_g2(np.array([0.5, -1e-9]))


def test_dominant_period_on_synthetic_signal():
    t = np.linspace(0.0, 10.0, 2001)
    period = 1.37
    signal = 1.0 + 0.5 * np.exp(-0.1 * t) * np.cos(2.0 * np.pi * t / period)
    assert dominant_period(t, signal) == pytest.approx(period, rel=0.01)
    with pytest.raises(ValueError):
        dominant_period(t[:3], signal[:3])
