"""System Hamiltonians and the Liouvillian of the driven Kerr photonic molecule.

Two linearly coupled Kerr cavities (local modes a, b) driven through
cavity a, in the frame rotating at the drive frequency:

    H = Da a'a + Db b'b - J(a'b + b'a) + U a'a'aa + U b'b'bb + eps (a' + a)

For equal detunings Da = Db = D the normal modes c+- = (a +- b)/sqrt(2)
diagonalize the linear part and the same Hamiltonian reads

    H = (D-J) c+'c+ + (D+J) c-'c-
        + U/2 (c+'c+'c+c+ + c-'c-'c-c-)
        + U/2 (c-'c-'c+c+ + c+'c+'c-c- + 4 c+'c+ c-'c-)
        + eps/sqrt(2) (c+' + c-' + c+ + c-)

Dissipation at rates kappa_a, kappa_b enters through normal-mode
dissipators with weights (kappa_a + kappa_b)/4 on the diagonal c+/c-
channels and (kappa_a - kappa_b)/4 on the c+ <-> c- cross channels; the
cross channels vanish identically for equal rates.  The bath is at zero
temperature (no thermal jump-up terms).

Both Hamiltonian builders return matrices over the SAME normal-mode
basis, so they must agree entry-wise whenever Da = Db; that equality is
the unitary-equivalence check used throughout the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BasisMismatch
from .fock import (
    SQRT2,
    FockBasis,
    OperatorMatrix,
    annihilation_minus,
    annihilation_plus,
    local_mode_ops,
    number_minus,
    number_plus,
)


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters, all in units of a common reference rate.

    delta_a, delta_b are the detunings of the two cavity modes from the
    drive; j_coupling >= 0 is the linear intercavity coupling; u_kerr is
    the per-cavity Kerr interaction (sign-sensitive); epsilon >= 0 is the
    (real) drive Rabi frequency; kappa_a, kappa_b > 0 are the cavity
    dissipation rates (any detection loss is folded in).
    """

    delta_a: float
    delta_b: float
    j_coupling: float
    u_kerr: float
    epsilon: float
    kappa_a: float
    kappa_b: float

    def __post_init__(self):
        if self.kappa_a <= 0 or self.kappa_b <= 0:
            raise ValueError(
                f"dissipation rates must be positive, got "
                f"kappa_a={self.kappa_a}, kappa_b={self.kappa_b}"
            )
        if self.epsilon < 0:
            raise ValueError(f"drive amplitude must be real and >= 0, got {self.epsilon}")
        if self.j_coupling < 0:
            raise ValueError(f"coupling must be >= 0, got {self.j_coupling}")

    @classmethod
    def symmetric(cls, delta: float, j: float, u: float, epsilon: float,
                  kappa: float = 1.0) -> "SystemParams":
        """Equal detunings and equal dissipation rates (the common case)."""
        return cls(delta_a=delta, delta_b=delta, j_coupling=j, u_kerr=u,
                   epsilon=epsilon, kappa_a=kappa, kappa_b=kappa)

    @property
    def equal_detunings(self) -> bool:
        return self.delta_a == self.delta_b

    @property
    def equal_kappas(self) -> bool:
        return self.kappa_a == self.kappa_b


@dataclass
class Liouvillian:
    """Master-equation generator as a dim**2 x dim**2 matrix.

    Acts on column-stacked density matrices: vec(rho)[i + dim*j] = rho[i, j].
    Trace preservation and Hermiticity preservation hold by construction
    and are property-tested.  Immutable after construction apart from a
    lazily cached spectral-radius estimate (benign to race).
    """

    matrix: OperatorMatrix
    basis_tag: str
    params: SystemParams

    _spectral_radius: float | None = None

    @property
    def dim(self) -> int:
        """Dimension of the underlying state space (not of the superoperator)."""
        return int(round(np.sqrt(self.matrix.dim)))

    def spectral_radius(self) -> float:
        """Power-iteration estimate of the largest |eigenvalue|, cached."""
        if self._spectral_radius is None:
            mat = self.matrix.mat
            rng = np.random.default_rng(2024)
            v = rng.standard_normal(mat.shape[0]) + 1j * rng.standard_normal(mat.shape[0])
            v /= np.linalg.norm(v)
            est = 0.0
            for _ in range(30):
                w = mat @ v
                nw = np.linalg.norm(w)
                if nw == 0.0:
                    est = 0.0
                    break
                est = nw
                v = w / nw
            self._spectral_radius = float(est)
        return self._spectral_radius


def _check_same_basis(basis: FockBasis, *ops: OperatorMatrix) -> None:
    for op in ops:
        if op.basis_tag != basis.tag:
            raise BasisMismatch(
                f"operator tagged {op.basis_tag!r} does not act on basis {basis.tag!r}"
            )


def _symmetrize(mat: np.ndarray) -> np.ndarray:
    return 0.5 * (mat + mat.conj().T)


def hamiltonian_local(params: SystemParams, basis: FockBasis) -> OperatorMatrix:
    """Hamiltonian assembled from the local cavity-mode operators a, b.

    Exists alongside the normal-mode builder so that the two assemblies
    can be compared entry-wise; it also covers unequal detunings, which
    the normal-mode form cannot express.
    """
    a, b = local_mode_ops(basis)
    ad, bd = a.dag(), b.dag()
    h = (
        params.delta_a * (ad @ a)
        + params.delta_b * (bd @ b)
        - params.j_coupling * (ad @ b + bd @ a)
        + params.u_kerr * (ad @ ad @ a @ a)
        + params.u_kerr * (bd @ bd @ b @ b)
        + params.epsilon * (ad + a)
    )
    return OperatorMatrix(_symmetrize(h.mat), basis.tag)


def hamiltonian_normal(params: SystemParams, basis: FockBasis) -> OperatorMatrix:
    """Hamiltonian in the normal-mode form (requires delta_a == delta_b).

    The U/2 exchange terms couple |2,0> and |0,2> with matrix element U;
    that coupling is what interferes with the direct two-photon drive path
    and produces the antibunching window.
    """
    if not params.equal_detunings:
        raise ValueError(
            "the normal-mode Hamiltonian assumes equal detunings "
            f"(delta_a == delta_b), got {params.delta_a} != {params.delta_b}; "
            "use hamiltonian_local for unequal detunings"
        )
    delta = params.delta_a
    j = params.j_coupling
    u = params.u_kerr
    eps = params.epsilon

    cp = annihilation_plus(basis)
    cm = annihilation_minus(basis)
    cpd, cmd = cp.dag(), cm.dag()
    n_p = number_plus(basis)
    n_m = number_minus(basis)

    h = (
        (delta - j) * n_p
        + (delta + j) * n_m
        + 0.5 * u * (cpd @ cpd @ cp @ cp + cmd @ cmd @ cm @ cm)
        + 0.5 * u * (cmd @ cmd @ cp @ cp + cpd @ cpd @ cm @ cm + 4.0 * (n_p @ n_m))
        + (eps / SQRT2) * (cpd + cmd + cp + cm)
    )
    return OperatorMatrix(_symmetrize(h.mat), basis.tag)


def _left_mul(op: np.ndarray) -> np.ndarray:
    """Superoperator for rho -> op @ rho under column stacking."""
    dim = op.shape[0]
    return np.kron(np.eye(dim), op)


def _right_mul(op: np.ndarray) -> np.ndarray:
    """Superoperator for rho -> rho @ op under column stacking."""
    dim = op.shape[0]
    return np.kron(op.T, np.eye(dim))


def _sandwich(left: np.ndarray, right_dag: np.ndarray) -> np.ndarray:
    """Superoperator for rho -> left @ rho @ right_dag^dag."""
    return np.kron(right_dag.conj(), left)


def _dissipator_line(c: np.ndarray, d: np.ndarray, anti: np.ndarray) -> np.ndarray:
    """One master-equation line: rho -> 2 c rho d'  - anti rho - rho anti."""
    return 2.0 * _sandwich(c, d) - _left_mul(anti) - _right_mul(anti)


# Parameter-independent dissipator structure, cached per basis tag.  The
# diagonal part multiplies (kappa_a + kappa_b)/4, the cross part
# (kappa_a - kappa_b)/4.
_DISSIPATOR_CACHE: dict[str, tuple[np.ndarray, np.ndarray]] = {}


def _dissipator_parts(basis: FockBasis) -> tuple[np.ndarray, np.ndarray]:
    cached = _DISSIPATOR_CACHE.get(basis.tag)
    if cached is not None:
        return cached
    cp = annihilation_plus(basis).mat
    cm = annihilation_minus(basis).mat
    cpd, cmd = cp.conj().T, cm.conj().T
    diag = _dissipator_line(cp, cp, cpd @ cp) + _dissipator_line(cm, cm, cmd @ cm)
    cross = _dissipator_line(cp, cm, cpd @ cm) + _dissipator_line(cm, cp, cmd @ cp)
    _DISSIPATOR_CACHE[basis.tag] = (diag, cross)
    return diag, cross


def build_liouvillian(params: SystemParams, h: OperatorMatrix,
                      basis: FockBasis) -> Liouvillian:
    """Assemble the full master-equation generator for column-stacked rho.

    L[rho] = -i[H, rho]
             + (kappa_a+kappa_b)/4 * (D[c+] + D[c-])        (diagonal channels)
             + (kappa_a-kappa_b)/4 * (cross c+ <-> c- channels)

    where each channel has the 2 c rho d' - (anti)rho - rho(anti) shape
    above.  For kappa_a == kappa_b the cross channels drop out exactly.
    """
    _check_same_basis(basis, h)
    hmat = h.mat
    scale = max(np.abs(hmat).max(), 1.0)
    if np.abs(hmat - hmat.conj().T).max() > 1e-12 * scale:
        raise ValueError("Liouvillian construction requires a Hermitian Hamiltonian")

    lmat = -1j * (_left_mul(hmat) - _right_mul(hmat))

    w_diag = 0.25 * (params.kappa_a + params.kappa_b)
    w_cross = 0.25 * (params.kappa_a - params.kappa_b)
    diag, cross = _dissipator_parts(basis)
    lmat = lmat + w_diag * diag
    if w_cross != 0.0:
        lmat = lmat + w_cross * cross

    return Liouvillian(
        matrix=OperatorMatrix(lmat, basis.tag, superop=True),
        basis_tag=basis.tag,
        params=params,
    )
