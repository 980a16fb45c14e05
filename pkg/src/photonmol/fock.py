"""Truncated two-mode Fock space and ladder-operator matrices.

The Hilbert space is spanned by |n+, n-> with n+ + n- <= n_max, where n+
(n-) counts photons in the symmetric (antisymmetric) normal mode of the
photonic molecule.  Truncation is by TOTAL photon number: raising a state
out of the retained space annihilates it (the top shell is absorbing).

State ordering is fixed once and for all: ascending total photon number,
then ascending n- within each shell.  Every operator matrix carries the
tag of the basis it was built over, and combining operators from
different bases is a hard error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BasisMismatch

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class FockBasis:
    """Enumerated two-mode Fock space truncated at total photon number n_max."""

    n_max: int
    states: tuple[tuple[int, int], ...]
    index_of: dict[tuple[int, int], int] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.states)

    @property
    def tag(self) -> str:
        return f"two-mode-total-n{self.n_max}"

    def index(self, n_plus: int, n_minus: int) -> int:
        return self.index_of[(n_plus, n_minus)]


def build_basis(n_max: int) -> FockBasis:
    """Enumerate all |n+, n-> with n+ + n- <= n_max.

    The dimension is (n_max+1)(n_max+2)/2; n_max = 0 yields just the
    vacuum.  Ordering: shells of ascending total photon number, ascending
    n- inside a shell, e.g. n_max = 2 gives
    |0,0>, |1,0>, |0,1>, |2,0>, |1,1>, |0,2>.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    states = tuple(
        (total - n_minus, n_minus)
        for total in range(n_max + 1)
        for n_minus in range(total + 1)
    )
    index_of = {state: i for i, state in enumerate(states)}
    return FockBasis(n_max=n_max, states=states, index_of=index_of)


@dataclass
class OperatorMatrix:
    """Dense complex matrix over a tagged Fock basis.

    ``superop`` flags matrices of dimension dim**2 that act on vectorized
    density matrices rather than on state vectors.  Instances are treated
    as immutable after construction and are safe to share across threads.
    """

    mat: np.ndarray
    basis_tag: str
    superop: bool = False

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def _check_compatible(self, other: "OperatorMatrix") -> None:
        if not isinstance(other, OperatorMatrix):
            raise TypeError(f"expected OperatorMatrix, got {type(other).__name__}")
        if self.basis_tag != other.basis_tag:
            raise BasisMismatch(
                f"cannot combine operators over bases "
                f"{self.basis_tag!r} and {other.basis_tag!r}"
            )
        if self.superop != other.superop:
            raise BasisMismatch("cannot combine an operator with a superoperator")

    def dag(self) -> "OperatorMatrix":
        """Hermitian adjoint."""
        return OperatorMatrix(self.mat.conj().T, self.basis_tag, self.superop)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_compatible(other)
        return OperatorMatrix(self.mat @ other.mat, self.basis_tag, self.superop)

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_compatible(other)
        return OperatorMatrix(self.mat + other.mat, self.basis_tag, self.superop)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_compatible(other)
        return OperatorMatrix(self.mat - other.mat, self.basis_tag, self.superop)

    def __mul__(self, scalar) -> "OperatorMatrix":
        return OperatorMatrix(self.mat * scalar, self.basis_tag, self.superop)

    __rmul__ = __mul__

    def __neg__(self) -> "OperatorMatrix":
        return OperatorMatrix(-self.mat, self.basis_tag, self.superop)


def _lowering_matrix(basis: FockBasis, mode: int) -> np.ndarray:
    """<m| c |n> = sqrt(n_mode) on the state with that mode lowered by one."""
    dim = basis.dim
    mat = np.zeros((dim, dim), dtype=complex)
    for j, (n_plus, n_minus) in enumerate(basis.states):
        occ = (n_plus, n_minus)[mode]
        if occ == 0:
            continue
        target = (n_plus - 1, n_minus) if mode == 0 else (n_plus, n_minus - 1)
        mat[basis.index_of[target], j] = np.sqrt(occ)
    return mat


def annihilation_plus(basis: FockBasis) -> OperatorMatrix:
    """Annihilation operator of the symmetric normal mode, c+."""
    return OperatorMatrix(_lowering_matrix(basis, 0), basis.tag)


def annihilation_minus(basis: FockBasis) -> OperatorMatrix:
    """Annihilation operator of the antisymmetric normal mode, c-."""
    return OperatorMatrix(_lowering_matrix(basis, 1), basis.tag)


def number_plus(basis: FockBasis) -> OperatorMatrix:
    """Number operator c+^dag c+ (exact integer diagonal)."""
    diag = np.array([n_plus for n_plus, _ in basis.states], dtype=complex)
    return OperatorMatrix(np.diag(diag), basis.tag)


def number_minus(basis: FockBasis) -> OperatorMatrix:
    """Number operator c-^dag c- (exact integer diagonal)."""
    diag = np.array([n_minus for _, n_minus in basis.states], dtype=complex)
    return OperatorMatrix(np.diag(diag), basis.tag)


def local_mode_ops(basis: FockBasis) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Local cavity-mode operators a, b expressed over the normal-mode basis.

    a = (c+ + c-)/sqrt(2) and b = (c+ - c-)/sqrt(2): the inverse of the
    rotation that defines the normal modes.  Both act on the same
    truncated space, so products of a and b inherit the same top-shell
    truncation as the c+- matrices.
    """
    c_plus = annihilation_plus(basis)
    c_minus = annihilation_minus(basis)
    a = (c_plus + c_minus) * (1.0 / SQRT2)
    b = (c_plus - c_minus) * (1.0 / SQRT2)
    return a, b


def vacuum_projector(basis: FockBasis) -> OperatorMatrix:
    """|0,0><0,0| as a matrix; convenient as an initial state."""
    dim = basis.dim
    mat = np.zeros((dim, dim), dtype=complex)
    mat[basis.index(0, 0), basis.index(0, 0)] = 1.0
    return OperatorMatrix(mat, basis.tag)
