"""Fock bases, ladder-operator algebras and tensor products.

Every Hamiltonian in the package is assembled from the constructors here.
Basis ordering is ascending in the quantum number of each factor:

* boson:      n = 0 .. n_max
* spin:       m = -S .. S            (stored through the integer 2S)
* qubit:      s = -1 (|g>), +1 (|e>)
* euclidean:  m = -M .. M            (Fourier index of the drive)

Multi-factor bases follow ``np.kron`` ordering, first factor most significant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

import numpy as np
import scipy.sparse as sp

__all__ = [
    "Factor",
    "Basis",
    "Operator",
    "StateVector",
    "boson",
    "spin",
    "qubit",
    "euclidean",
    "boson_ops",
    "spin_ops",
    "qubit_ops",
    "euclidean_ops",
    "identity",
    "phase_state",
    "basis_state",
    "tensor",
    "kron_states",
]

HERMITIAN_TOL = 1e-12
NORM_TOL = 1e-10

KINDS = ("boson", "spin", "qubit", "euclidean")


@dataclass(frozen=True)
class Factor:
    """One tensor factor. ``param`` is n_max, 2S, None or M depending on kind."""

    kind: str
    param: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown factor kind {self.kind!r}")

    @property
    def dim(self) -> int:
        if self.kind == "boson":
            return self.param + 1
        if self.kind == "spin":
            return self.param + 1
        if self.kind == "qubit":
            return 2
        return 2 * self.param + 1

    def quantum_numbers(self) -> list:
        """Labels of the basis states in storage order."""
        if self.kind == "boson":
            return list(range(self.param + 1))
        if self.kind == "spin":
            two_s = self.param
            return [Fraction(2 * i - two_s, 2) for i in range(two_s + 1)]
        if self.kind == "qubit":
            return [-1, 1]
        return list(range(-self.param, self.param + 1))


def boson(n_max: int) -> Factor:
    return Factor("boson", int(n_max))


def spin(S) -> Factor:
    return Factor("spin", _two_s(S))


def qubit() -> Factor:
    return Factor("qubit", None)


def euclidean(M: int) -> Factor:
    return Factor("euclidean", int(M))


@dataclass(frozen=True)
class Basis:
    factors: tuple[Factor, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(f.dim for f in self.factors)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims)) if self.factors else 1

    def __add__(self, other: "Basis") -> "Basis":
        return Basis(self.factors + other.factors)

    def index(self, kind: str) -> int:
        """Position of the first factor of the given kind."""
        for i, f in enumerate(self.factors):
            if f.kind == kind:
                return i
        raise KeyError(kind)

    def labels(self) -> list[tuple]:
        """Structured node labels, one tuple of (kind, quantum number) pairs per state."""
        per_factor = [[(f.kind, q) for q in f.quantum_numbers()] for f in self.factors]
        out = [()]
        for labs in per_factor:
            out = [prev + (lab,) for prev in out for lab in labs]
        return out


def _as_basis(b) -> Basis:
    if isinstance(b, Basis):
        return b
    if isinstance(b, Factor):
        return Basis((b,))
    return Basis(tuple(b))


def _two_s(S) -> int:
    two_s = Fraction(S) * 2
    if two_s.denominator != 1 or two_s <= 0:
        raise ValueError(f"spin S={S} is not a positive half-integer")
    return int(two_s)


class Operator:
    """Sparse complex matrix tagged with the basis it acts on.

    Supports ``+``, ``-``, scalar ``*``, ``@`` (operator product) and ``.dag()``.
    Instances are treated as immutable.
    """

    __slots__ = ("basis", "mat")

    def __init__(self, basis, mat):
        basis = _as_basis(basis)
        mat = sp.csr_matrix(mat, dtype=complex)
        if mat.shape != (basis.dim, basis.dim):
            raise ValueError(f"matrix shape {mat.shape} does not match basis dimension {basis.dim}")
        mat.sum_duplicates()
        mat.sort_indices()
        self.basis = basis
        self.mat = mat

    @property
    def dim(self) -> int:
        return self.basis.dim

    def dense(self) -> np.ndarray:
        return self.mat.toarray()

    def dag(self) -> "Operator":
        return Operator(self.basis, self.mat.conj().T)

    def hermiticity_defect(self) -> float:
        d = self.mat - self.mat.conj().T
        return float(abs(d).max()) if d.nnz else 0.0

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return self.hermiticity_defect() < tol

    def _check(self, other: "Operator"):
        if other.basis != self.basis:
            raise ValueError("basis mismatch between operators")

    def __add__(self, other):
        if isinstance(other, Operator):
            self._check(other)
            return Operator(self.basis, self.mat + other.mat)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, Operator):
            self._check(other)
            return Operator(self.basis, self.mat - other.mat)
        return NotImplemented

    def __neg__(self):
        return Operator(self.basis, -self.mat)

    def __mul__(self, c):
        if np.isscalar(c):
            return Operator(self.basis, self.mat * c)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, c):
        return Operator(self.basis, self.mat / c)

    def __matmul__(self, other):
        if isinstance(other, Operator):
            self._check(other)
            return Operator(self.basis, self.mat @ other.mat)
        if isinstance(other, StateVector):
            if other.basis != self.basis:
                raise ValueError("basis mismatch between operator and state")
            return StateVector(self.basis, self.mat @ other.amplitudes, normalize=False)
        return self.mat @ other

    def comm(self, other: "Operator") -> "Operator":
        return self @ other - other @ self

    def expect(self, psi: "StateVector") -> complex:
        v = psi.amplitudes
        return complex(np.vdot(v, self.mat @ v))

    def __repr__(self):
        return f"Operator(dims={self.basis.dims}, nnz={self.mat.nnz})"


class StateVector:
    """Normalised complex amplitude vector on a basis."""

    __slots__ = ("basis", "amplitudes")

    def __init__(self, basis, amplitudes, normalize: bool = True):
        basis = _as_basis(basis)
        v = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if v.size != basis.dim:
            raise ValueError(f"{v.size} amplitudes for basis of dimension {basis.dim}")
        if normalize:
            nrm = np.linalg.norm(v)
            if nrm == 0:
                raise ValueError("zero state cannot be normalised")
            v = v / nrm
        v.setflags(write=False)
        self.basis = basis
        self.amplitudes = v

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "StateVector") -> float:
        return abs(self.overlap(other)) ** 2

    def __repr__(self):
        return f"StateVector(dims={self.basis.dims})"


def identity(basis) -> Operator:
    basis = _as_basis(basis)
    return Operator(basis, sp.identity(basis.dim, dtype=complex, format="csr"))


def boson_ops(n_max: int):
    """Annihilation, creation and number operators truncated at ``n_max``."""
    if int(n_max) < 1:
        raise ValueError("n_max must be at least 1")
    f = boson(n_max)
    n = np.arange(n_max + 1)
    a = sp.diags(np.sqrt(n[1:]), 1, format="csr")
    a_op = Operator(f, a)
    return a_op, a_op.dag(), Operator(f, sp.diags(n.astype(float), format="csr"))


def spin_ops(S):
    """Return (Sx, Sy, Sz, S+, S-) for spin ``S`` in the Dicke basis m = -S..S."""
    two_s = _two_s(S)
    f = Factor("spin", two_s)
    s = two_s / 2
    m = np.arange(two_s + 1) - s
    # S+|m> = sqrt(S(S+1) - m(m+1)) |m+1>
    up = np.sqrt(s * (s + 1) - m[:-1] * (m[:-1] + 1))
    splus = Operator(f, sp.diags(up, -1, format="csr"))
    sminus = splus.dag()
    sx = (splus + sminus) * 0.5
    sy = (splus - sminus) * (-0.5j)
    sz = Operator(f, sp.diags(m, format="csr"))
    return sx, sy, sz, splus, sminus


def qubit_ops():
    """Return (sigma_x, sigma_y, sigma_z, sigma_+, sigma_-) with basis (|g>, |e>)."""
    f = qubit()
    sp_ = Operator(f, sp.csr_matrix(np.array([[0, 0], [1, 0]], dtype=complex)))
    sm = sp_.dag()
    sz = Operator(f, sp.diags([-1.0, 1.0], format="csr"))
    return sp_ + sm, (sp_ - sm) * (-1j), sz, sp_, sm


def euclidean_ops(M: int, boundary: str = "open"):
    """Return (E0, E+, E-) on the Fourier lattice m = -M..M.

    ``boundary="periodic"`` closes the chain, E+|M> = |-M>.
    """
    if int(M) < 1:
        raise ValueError("M must be at least 1")
    if boundary not in ("open", "periodic"):
        raise ValueError(f"unknown boundary {boundary!r}")
    f = euclidean(M)
    n = 2 * M + 1
    e_plus = sp.diags(np.ones(n - 1), -1, format="lil")
    if boundary == "periodic":
        e_plus[0, n - 1] = 1.0
    e_plus = Operator(f, e_plus.tocsr())
    e0 = Operator(f, sp.diags(np.arange(-M, M + 1, dtype=float), format="csr"))
    return e0, e_plus, e_plus.dag()


def basis_state(basis, index: int) -> StateVector:
    basis = _as_basis(basis)
    v = np.zeros(basis.dim, dtype=complex)
    v[index] = 1.0
    return StateVector(basis, v)


def phase_state(M: int, theta: float = 0.0) -> StateVector:
    """Uniform-amplitude state e^{-i theta m}/sqrt(2M+1) on the Fourier lattice."""
    m = np.arange(-M, M + 1)
    return StateVector(euclidean(M), np.exp(-1j * theta * m) / np.sqrt(2 * M + 1), normalize=False)


def tensor(*ops: Union[Operator, Factor]) -> Operator:
    """Kronecker product; a bare ``Factor`` stands for the identity on that factor."""
    mats, factors = [], []
    for op in ops:
        if isinstance(op, Factor):
            mats.append(sp.identity(op.dim, dtype=complex, format="csr"))
            factors.append(op)
        elif isinstance(op, Operator):
            mats.append(op.mat)
            factors.extend(op.basis.factors)
        else:
            raise TypeError(f"cannot tensor {type(op).__name__}")
    mat = reduce(lambda x, y: sp.kron(x, y, format="csr"), mats)
    return Operator(Basis(tuple(factors)), mat)


def kron_states(*states: StateVector) -> StateVector:
    basis = Basis(sum((s.basis.factors for s in states), ()))
    v = reduce(np.kron, [s.amplitudes for s in states])
    return StateVector(basis, v)


def embed(op: Operator, basis: Basis, position: int) -> Operator:
    """Place a single-factor operator at ``position`` of a multi-factor basis."""
    parts: list = list(basis.factors)
    if basis.factors[position] != op.basis.factors[0]:
        raise ValueError("operator factor does not match basis factor at position")
    parts[position] = op
    return tensor(*parts)


def operator_from_dense(basis, mat: np.ndarray) -> Operator:
    return Operator(basis, sp.csr_matrix(mat))


def max_abs(op_or_mat) -> float:
    m = op_or_mat.mat if isinstance(op_or_mat, Operator) else op_or_mat
    if sp.issparse(m):
        return float(abs(m).max()) if m.nnz else 0.0
    return float(np.abs(m).max()) if np.size(m) else 0.0


def product_basis(factors: Iterable[Factor]) -> Basis:
    return Basis(tuple(factors))


def split_index(basis: Basis, idx: int) -> Sequence[int]:
    return np.unravel_index(idx, basis.dims)
