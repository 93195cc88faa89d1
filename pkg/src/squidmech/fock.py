"""Bosonic operator algebra on truncated Fock spaces.

Operators are complex matrices carrying the ordered subsystem dimensions of
the tensor-product space they act on.  Representation (dense ndarray vs
compressed sparse) is chosen automatically from the fill fraction and is
transparent to callers.  Everything is immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

# Matrices with fill below this fraction are stored sparse.
SPARSE_FILL_THRESHOLD = 0.25

HERMITICITY_TOL = 1e-12


DimsLike = "HilbertDims | Sequence[int]"


@dataclass(frozen=True)
class HilbertDims:
    """Ordered truncation dimensions of the tensor-product factors."""

    subsystem_dims: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.subsystem_dims:
            raise ValueError("at least one subsystem required")
        for d in self.subsystem_dims:
            if not (isinstance(d, (int, np.integer)) and d >= 2):
                raise ValueError(f"every subsystem dimension must be an int >= 2, got {d!r}")
        object.__setattr__(self, "subsystem_dims", tuple(int(d) for d in self.subsystem_dims))

    @classmethod
    def of(cls, dims: "HilbertDims | Sequence[int] | int") -> "HilbertDims":
        if isinstance(dims, HilbertDims):
            return dims
        if isinstance(dims, (int, np.integer)):
            return cls((int(dims),))
        return cls(tuple(dims))

    @property
    def total(self) -> int:
        out = 1
        for d in self.subsystem_dims:
            out *= d
        return out

    def __len__(self) -> int:
        return len(self.subsystem_dims)

    def __iter__(self):
        return iter(self.subsystem_dims)

    def __getitem__(self, i):
        return self.subsystem_dims[i]


def _as_matrix(m):
    """Accept ndarray or scipy sparse, return one of the two in canonical form."""
    if sp.issparse(m):
        return m.tocsr().astype(complex)
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"operator matrix must be square, got shape {arr.shape}")
    return arr


def _fill_fraction(m) -> float:
    size = m.shape[0] * m.shape[1]
    if sp.issparse(m):
        return m.nnz / size
    return np.count_nonzero(m) / size


class QuantumOperator:
    """Complex square matrix on a truncated tensor-product Fock space.

    The backing store is dense or CSR-sparse depending on fill fraction;
    arithmetic (`+`, `-`, scalar `*`, `@`, `dag`) preserves the invariant
    and re-decides the representation of the result.
    """

    __slots__ = ("_matrix", "dims")

    def __init__(self, matrix, dims: DimsLike, hermitian: bool | None = None):
        dims = HilbertDims.of(dims)
        matrix = _as_matrix(matrix)
        if matrix.shape[0] != dims.total:
            raise ValueError(
                f"matrix dimension {matrix.shape[0]} does not match product of "
                f"subsystem dims {tuple(dims)} = {dims.total}")
        if _fill_fraction(matrix) < SPARSE_FILL_THRESHOLD:
            matrix = sp.csr_matrix(matrix) if not sp.issparse(matrix) else matrix
        else:
            matrix = matrix.toarray() if sp.issparse(matrix) else matrix
        object.__setattr__(self, "_matrix", matrix)
        object.__setattr__(self, "dims", dims)
        if hermitian:
            defect = self.hermiticity_defect()
            if defect >= HERMITICITY_TOL:
                raise ValueError(
                    f"operator declared hermitian but max|A - A^dag| = {defect:.3e}")

    def __setattr__(self, name, value):
        raise AttributeError("QuantumOperator is immutable")

    # -- representation ----------------------------------------------------
    @property
    def matrix(self):
        return self._matrix

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self._matrix)

    @property
    def shape(self) -> tuple[int, int]:
        return self._matrix.shape

    def to_array(self) -> np.ndarray:
        if self.is_sparse:
            return self._matrix.toarray()
        return np.array(self._matrix, copy=True)

    def to_sparse(self) -> sp.csr_matrix:
        if self.is_sparse:
            return self._matrix
        return sp.csr_matrix(self._matrix)

    # -- algebra -----------------------------------------------------------
    def dag(self) -> "QuantumOperator":
        return QuantumOperator(self._matrix.conj().T, self.dims)

    def __add__(self, other: "QuantumOperator") -> "QuantumOperator":
        self._check_dims(other)
        return QuantumOperator(self._matrix + other._matrix, self.dims)

    def __sub__(self, other: "QuantumOperator") -> "QuantumOperator":
        self._check_dims(other)
        return QuantumOperator(self._matrix - other._matrix, self.dims)

    def __mul__(self, scalar) -> "QuantumOperator":
        return QuantumOperator(self._matrix * scalar, self.dims)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "QuantumOperator":
        return QuantumOperator(self._matrix / scalar, self.dims)

    def __neg__(self) -> "QuantumOperator":
        return QuantumOperator(-self._matrix, self.dims)

    def __matmul__(self, other: "QuantumOperator") -> "QuantumOperator":
        self._check_dims(other)
        return QuantumOperator(self._matrix @ other._matrix, self.dims)

    def commutator(self, other: "QuantumOperator") -> "QuantumOperator":
        return self @ other - other @ self

    def trace(self) -> complex:
        if self.is_sparse:
            return complex(self._matrix.diagonal().sum())
        return complex(np.trace(self._matrix))

    def max_abs(self) -> float:
        if self.is_sparse:
            return float(np.max(np.abs(self._matrix.data))) if self._matrix.nnz else 0.0
        return float(np.max(np.abs(self._matrix))) if self._matrix.size else 0.0

    def hermiticity_defect(self) -> float:
        diff = self._matrix - self._matrix.conj().T
        if sp.issparse(diff):
            return float(np.max(np.abs(diff.data))) if diff.nnz else 0.0
        return float(np.max(np.abs(diff))) if diff.size else 0.0

    def is_hermitian(self, tol: float = HERMITICITY_TOL) -> bool:
        return self.hermiticity_defect() < tol

    def _check_dims(self, other: "QuantumOperator") -> None:
        if not isinstance(other, QuantumOperator):
            raise TypeError(f"expected QuantumOperator, got {type(other)!r}")
        if tuple(other.dims) != tuple(self.dims):
            raise ValueError(f"dimension mismatch: {tuple(self.dims)} vs {tuple(other.dims)}")

    def __repr__(self) -> str:
        kind = "sparse" if self.is_sparse else "dense"
        return f"QuantumOperator(dims={tuple(self.dims)}, {kind})"


def destroy(dim: int) -> QuantumOperator:
    """Lowering operator: <n-1| a |n> = sqrt(n)."""
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    return QuantumOperator(sp.diags(np.sqrt(np.arange(1, dim)), 1, format="csr",
                                    dtype=complex), (dim,))


def create(dim: int) -> QuantumOperator:
    """Raising operator, the adjoint of `destroy`."""
    return destroy(dim).dag()


def number(dim: int) -> QuantumOperator:
    """Occupation-number operator with exact integer diagonal 0..dim-1."""
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    return QuantumOperator(sp.diags(np.arange(dim, dtype=float), 0, format="csr",
                                    dtype=complex), (dim,))


def identity(dim: int) -> QuantumOperator:
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    return QuantumOperator(sp.identity(dim, dtype=complex, format="csr"), (dim,))


def position(dim: int) -> QuantumOperator:
    """Dimensionless quadrature (a + a^dag)."""
    a = destroy(dim)
    return a + a.dag()


def tensor(ops: Iterable[QuantumOperator]) -> QuantumOperator:
    """Kronecker product in list order; subsystem dims concatenate."""
    ops = list(ops)
    if not ops:
        raise ValueError("tensor() requires a nonempty list of operators")
    out = ops[0].matrix
    dims: list[int] = list(ops[0].dims)
    for op in ops[1:]:
        out = sp.kron(out, op.matrix, format="csr")
        dims.extend(op.dims)
    return QuantumOperator(out, dims)


def mode_operator(dims: DimsLike, subsystem: int, single_mode_op) -> QuantumOperator:
    """Embed a single-mode operator factory at one slot of a product space."""
    dims = HilbertDims.of(dims)
    if not 0 <= subsystem < len(dims):
        raise ValueError(f"subsystem {subsystem} out of range for dims {tuple(dims)}")
    factors = [identity(d) if i != subsystem else single_mode_op(d)
               for i, d in enumerate(dims)]
    return tensor(factors)


def mode_destroy(dims: DimsLike, subsystem: int) -> QuantumOperator:
    """Lowering operator for one subsystem of a product space."""
    return mode_operator(dims, subsystem, destroy)


def mode_number(dims: DimsLike, subsystem: int) -> QuantumOperator:
    """Number operator for one subsystem of a product space."""
    return mode_operator(dims, subsystem, number)


@dataclass(frozen=True)
class QuantumState:
    """Density matrix on a truncated tensor-product Fock space.

    `discarded_weight` records probability lost to truncation by the state
    constructors (coherent/thermal renormalize after truncation).
    Invariants (unit trace, hermiticity, positivity) are checked by
    `validate`, which solvers call before handing a state back.
    """

    density_matrix: np.ndarray
    dims: HilbertDims
    discarded_weight: float = 0.0

    def __post_init__(self) -> None:
        dims = HilbertDims.of(self.dims)
        object.__setattr__(self, "dims", dims)
        rho = np.asarray(self.density_matrix, dtype=complex)
        if rho.ndim != 2 or rho.shape != (dims.total, dims.total):
            raise ValueError(
                f"density matrix shape {rho.shape} does not match dims {tuple(dims)}")
        object.__setattr__(self, "density_matrix", rho)

    def validate(self, trace_tol: float = 1e-10, herm_tol: float = 1e-12,
                 eig_floor: float = -1e-10) -> "QuantumState":
        rho = self.density_matrix
        trace_defect = abs(np.trace(rho).real - 1.0) + abs(np.trace(rho).imag)
        if trace_defect >= trace_tol:
            raise ValueError(f"state trace deviates from 1 by {trace_defect:.3e}")
        herm_defect = float(np.max(np.abs(rho - rho.conj().T)))
        if herm_defect >= herm_tol:
            raise ValueError(f"state hermiticity defect {herm_defect:.3e}")
        min_eig = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
        if min_eig <= eig_floor:
            raise ValueError(f"state has negative eigenvalue {min_eig:.3e}")
        return self

    def reduced(self, subsystem: int) -> "QuantumState":
        """Partial trace onto one subsystem."""
        dims = tuple(self.dims)
        if not 0 <= subsystem < len(dims):
            raise ValueError(f"subsystem {subsystem} out of range for dims {dims}")
        rho = self.density_matrix.reshape(dims + dims)
        remaining = list(range(len(dims)))
        for i in sorted((i for i in range(len(dims)) if i != subsystem), reverse=True):
            j = remaining.index(i)
            rho = np.trace(rho, axis1=j, axis2=j + len(remaining))
            remaining.pop(j)
        d = dims[subsystem]
        return QuantumState(rho.reshape(d, d), (d,),
                            discarded_weight=self.discarded_weight)

    def populations(self) -> np.ndarray:
        return np.real(np.diag(self.density_matrix))

    def top_level_population(self, subsystem: int) -> float:
        """Occupation of the highest retained Fock level of one subsystem."""
        reduced = self.reduced(subsystem)
        return float(reduced.populations()[-1])

    def purity(self) -> float:
        rho = self.density_matrix
        return float(np.real(np.trace(rho @ rho)))


def expectation(op: QuantumOperator, state: QuantumState) -> complex:
    """Tr(op rho); real up to roundoff when op is hermitian."""
    if tuple(op.dims) != tuple(state.dims):
        raise ValueError(
            f"operator dims {tuple(op.dims)} do not match state dims {tuple(state.dims)}")
    if op.is_sparse:
        return complex((op.matrix @ state.density_matrix).diagonal().sum())
    return complex(np.trace(op.matrix @ state.density_matrix))


def basis_state(dims: DimsLike, occupation: Sequence[int]) -> QuantumState:
    """Product Fock state |n1, n2, ...> as a density matrix."""
    dims = HilbertDims.of(dims)
    occupation = tuple(int(n) for n in occupation)
    if len(occupation) != len(dims):
        raise ValueError(f"need one occupation per subsystem, got {occupation}")
    for n, d in zip(occupation, dims):
        if not 0 <= n < d:
            raise ValueError(f"occupation {n} out of range for dimension {d}")
    index = 0
    for n, d in zip(occupation, dims):
        index = index * d + n
    rho = np.zeros((dims.total, dims.total), dtype=complex)
    rho[index, index] = 1.0
    return QuantumState(rho, dims)


def coherent_ket(dim: int, amplitude: complex) -> tuple[np.ndarray, float]:
    """Truncated coherent-state vector and the weight lost to truncation."""
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    n = np.arange(dim)
    # amplitude**n / sqrt(n!) in log space for stability at large |amplitude|
    log_mag = n * np.log(abs(amplitude)) if amplitude != 0 else np.where(n == 0, 0.0, -np.inf)
    log_norm = -0.5 * np.array([math.lgamma(k + 1) for k in n])
    mag = np.exp(log_mag + log_norm - 0.5 * abs(amplitude) ** 2)
    phase = np.exp(1j * n * np.angle(amplitude)) if amplitude != 0 else np.ones(dim)
    ket = mag * phase
    kept = float(np.sum(mag ** 2))
    discarded = max(0.0, 1.0 - kept)
    return ket / math.sqrt(kept), discarded


def coherent_state(dim: int, amplitude: complex) -> QuantumState:
    """Truncated coherent state, renormalized; discarded weight recorded."""
    ket, discarded = coherent_ket(dim, amplitude)
    return QuantumState(np.outer(ket, ket.conj()), (dim,), discarded_weight=discarded)


def thermal_state(dim: int, mean_occupation: float) -> QuantumState:
    """Truncated thermal state with diagonal ~ (nbar/(nbar+1))**n, renormalized."""
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    if mean_occupation < 0.0:
        raise ValueError("mean_occupation must be >= 0")
    if mean_occupation == 0.0:
        return basis_state((dim,), (0,))
    ratio = mean_occupation / (mean_occupation + 1.0)
    weights = ratio ** np.arange(dim) / (mean_occupation + 1.0)
    kept = float(weights.sum())
    return QuantumState(np.diag(weights / kept).astype(complex), (dim,),
                        discarded_weight=max(0.0, 1.0 - kept))
