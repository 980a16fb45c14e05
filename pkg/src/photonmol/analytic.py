"""Weak-drive analytic model: amplitude hierarchy, g2 closed form, optima.

For drive much weaker than the linewidth the system wavefunction stays
within the two-photon manifold,

    |psi> = C00|0,0> + C10|1,0> + C01|0,1> + C20|2,0> + C11|1,1> + C02|0,2>,

with |C00| >> |C10|, |C01| >> |C20|, |C11|, |C02|.  Adding -i kappa/2
per photon to the detunings (the standard non-Hermitian bookkeeping for
equal cavity losses) and dropping the feedback of two-photon amplitudes
onto the one-photon sector, the steady-state amplitudes obey, with
A = D - J - i kappa/2 and B = D + J - i kappa/2,

    A C10 = -eps/sqrt(2) C00
    B C01 = -eps/sqrt(2) C00
    (U + 2A) C20 + U C02 + eps C10 = 0
    (U + 2B) C02 + U C20 + eps C01 = 0
    (2D - i kappa + 2U) C11 + eps/sqrt(2) (C10 + C01) = 0

This module solves that hierarchy and evaluates the resulting g2(0) in
closed form.  It is deliberately an independent implementation path: the
master-equation solver never touches these equations, so agreement
between the two is a genuine cross-check of both.

Requiring the two-photon amplitude of one normal mode to vanish exactly
(destructive interference of the direct two-photon path against the path
through the other mode's Kerr coupling) pins down closed-form optima:

    symmetric mode:      delta_opt = -J,  u_opt = +kappa^2 / (4J)
    antisymmetric mode:  delta_opt = +J,  u_opt = -kappa^2 / (4J)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCoupling, SingularAmplitudeSystem, VacuumOccupation
from .model import SystemParams
from .observables import OCCUPATION_FLOOR

MODES = ("plus", "minus")


@dataclass(frozen=True)
class AnalyticAmplitudes:
    """Steady-state amplitudes of the two-photon-manifold ansatz (C00 = 1)."""

    c00: complex
    c10: complex
    c01: complex
    c20: complex
    c11: complex
    c02: complex
    eta: complex  # C01/C10, a pure one-photon quantity
    params: SystemParams


@dataclass(frozen=True)
class OptimalConditions:
    """Closed-form (delta, u) at which one mode's two-photon amplitude vanishes."""

    mode: str
    delta_opt: float
    u_opt: float


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def _require_weak_drive_form(params: SystemParams, what: str) -> None:
    if not params.equal_kappas:
        raise ValueError(
            f"{what} assumes equal dissipation rates, got "
            f"kappa_a={params.kappa_a} != kappa_b={params.kappa_b}"
        )
    if not params.equal_detunings:
        raise ValueError(
            f"{what} assumes equal detunings, got "
            f"delta_a={params.delta_a} != delta_b={params.delta_b}"
        )


def solve_amplitudes(params: SystemParams) -> AnalyticAmplitudes:
    """Solve the steady-state amplitude hierarchy with C00 = 1.

    One-photon amplitudes come from two scalar divisions, the two-photon
    pair (C20, C02) from a complex 2x2 solve, and C11 from one more
    scalar division.  kappa > 0 keeps every denominator off the real
    axis; a singular 2x2 system is still reported rather than resolved.
    """
    _require_weak_drive_form(params, "the amplitude hierarchy")
    if params.epsilon <= 0:
        raise ValueError("the amplitude hierarchy needs a nonzero drive")

    delta = params.delta_a
    j = params.j_coupling
    u = params.u_kerr
    eps = params.epsilon
    kappa = params.kappa_a

    a_pole = delta - j - 0.5j * kappa
    b_pole = delta + j - 0.5j * kappa

    c00 = 1.0 + 0.0j
    c10 = -eps / np.sqrt(2.0) / a_pole * c00
    c01 = -eps / np.sqrt(2.0) / b_pole * c00

    coeff = np.array([[u + 2.0 * a_pole, u], [u, u + 2.0 * b_pole]], dtype=complex)
    det = coeff[0, 0] * coeff[1, 1] - coeff[0, 1] * coeff[1, 0]
    if abs(det) < 1e-14:
        raise SingularAmplitudeSystem(
            f"two-photon amplitude system is singular (|det| = {abs(det):.3e})"
        )
    rhs = np.array([-eps * c10, -eps * c01], dtype=complex)
    c20 = (rhs[0] * coeff[1, 1] - coeff[0, 1] * rhs[1]) / det
    c02 = (coeff[0, 0] * rhs[1] - rhs[0] * coeff[1, 0]) / det

    c11 = -eps / np.sqrt(2.0) * (c10 + c01) / (2.0 * delta - 1j * kappa + 2.0 * u)

    return AnalyticAmplitudes(
        c00=c00, c10=complex(c10), c01=complex(c01), c20=complex(c20),
        c11=complex(c11), c02=complex(c02), eta=complex(a_pole / b_pole),
        params=params,
    )


def analytic_g2_zero(amps: AnalyticAmplitudes, mode: str,
                     leading_order: bool = False) -> float:
    """Equal-time g2 of one normal mode evaluated on the ansatz.

    Over the (unnormalized) six-amplitude state, with N = sum |C|^2:

        <c+'c+'c+c+> = sum n+(n+ - 1)|C|^2 / N = 2|C20|^2 / N
        <c+'c+>      = (|C10|^2 + 2|C20|^2 + |C11|^2) / N

    so

        g2+(0) = 2 |C20|^2 N / (|C10|^2 + 2|C20|^2 + |C11|^2)^2,

    and symmetrically for the antisymmetric mode with C02, C01.  The
    norm factors cancel the arbitrary overall scale of the ansatz.  With
    leading_order=True the occupation is approximated by |C10|^2 alone
    and the norm by |C00|^2 = 1, giving the familiar 2|C20|^2/|C10|^4;
    the difference between the two forms is itself O(eps^2).
    """
    _check_mode(mode)
    norm = (
        abs(amps.c00) ** 2 + abs(amps.c10) ** 2 + abs(amps.c01) ** 2
        + abs(amps.c20) ** 2 + abs(amps.c11) ** 2 + abs(amps.c02) ** 2
    )
    if mode == "plus":
        pair, single = amps.c20, amps.c10
    else:
        pair, single = amps.c02, amps.c01

    if leading_order:
        occupation = abs(single) ** 2
        norm = abs(amps.c00) ** 2
    else:
        occupation = abs(single) ** 2 + 2.0 * abs(pair) ** 2 + abs(amps.c11) ** 2

    if occupation / norm <= OCCUPATION_FLOOR:
        raise VacuumOccupation(
            f"analytic occupation {occupation / norm:.3e} at or below the floor"
        )
    return float(2.0 * abs(pair) ** 2 * norm / occupation**2)


def optimal_conditions(mode: str, j: float, kappa: float) -> OptimalConditions:
    """Closed-form optimum (delta_opt, u_opt) for strong antibunching."""
    _check_mode(mode)
    if j == 0:
        raise DegenerateCoupling("u_opt diverges as the coupling goes to zero")
    if j < 0 or kappa <= 0:
        raise ValueError(f"need j > 0 and kappa > 0, got j={j}, kappa={kappa}")
    u_opt = kappa**2 / (4.0 * j)
    if mode == "plus":
        return OptimalConditions(mode="plus", delta_opt=-j, u_opt=u_opt)
    return OptimalConditions(mode="minus", delta_opt=j, u_opt=-u_opt)


def optimality_residual(params: SystemParams, mode: str) -> complex:
    """Interference condition whose zero marks the optimal antibunching point.

    For the symmetric mode the vanishing of the two-photon amplitude is
    equivalent to

        kappa^2/4 - J U - (D + J)^2 + i (D + J) kappa = 0,

    whose imaginary part fixes delta_opt = -J and whose real part then
    fixes u_opt = kappa^2/(4J).  The antisymmetric mode swaps the signs
    of J U and of the detuning offset.
    """
    _check_mode(mode)
    _require_weak_drive_form(params, "the optimality residual")
    delta = params.delta_a
    j = params.j_coupling
    u = params.u_kerr
    kappa = params.kappa_a
    if mode == "plus":
        shifted = delta + j
        return complex(kappa**2 / 4.0 - j * u - shifted**2, shifted * kappa)
    shifted = delta - j
    return complex(kappa**2 / 4.0 + j * u - shifted**2, shifted * kappa)


def short_time_populations(params: SystemParams, t: float) -> tuple[float, float]:
    """One-photon populations in the short-time Rabi picture at delta = -J.

    Before dissipation matters (t << 2 pi / kappa), the vacuum couples to
    |0,1> resonantly and to |1,0> with detuning 2J, so

        p10 = [1 - cos(2 J t)] eps^2 / (4 J^2)      (detuned, shallow)
        p01 = [1 - cos(sqrt(2) eps t)] / 2           (resonant, full swing)

    The 2J oscillation of p10 is what shows up as the g2(tau) beat.
    """
    _require_weak_drive_form(params, "the short-time picture")
    j = params.j_coupling
    if j == 0:
        raise DegenerateCoupling("the short-time picture needs a nonzero coupling")
    if params.delta_a != -j:
        raise ValueError(
            f"the short-time formulas hold at delta = -j, got "
            f"delta={params.delta_a}, j={j}"
        )
    eps = params.epsilon
    p10 = (1.0 - np.cos(2.0 * j * t)) * eps**2 / (4.0 * j**2)
    p01 = (1.0 - np.cos(np.sqrt(2.0) * eps * t)) / 2.0
    return float(p10), float(p01)
