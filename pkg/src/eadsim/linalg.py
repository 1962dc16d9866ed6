"""Dense complex linear algebra on a handful of qubits.

Matrices are plain ``numpy`` complex arrays. Qubit ordering is big-endian:
in a state over subsystems ``("A", "B", "C")`` the basis label ``|abc>``
has ``a`` as the most significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ConfigurationError, ContractViolation

ATOL = 1e-12
SPECTRAL_TOL = 1e-10
MAX_EIGEN_DIM = 64
JACOBI_MAX_DIM = 4


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ContractViolation(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    return m


def allclose(a, b, atol: float = ATOL) -> bool:
    """Entrywise comparison with an absolute tolerance."""
    a, b = np.asarray(a), np.asarray(b)
    return a.shape == b.shape and bool(np.all(np.abs(a - b) <= atol))


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T


def is_hermitian(a, atol: float = ATOL) -> bool:
    a = np.asarray(a)
    return a.shape[0] == a.shape[1] and bool(np.all(np.abs(a - a.conj().T) <= atol))


def hermitian_eigen(a) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns)."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ContractViolation(f"eigen-decomposition needs a square matrix, got {a.shape}")
    if a.shape[0] > MAX_EIGEN_DIM:
        raise ContractViolation(f"dimension {a.shape[0]} exceeds {MAX_EIGEN_DIM}")
    if not is_hermitian(a):
        raise ContractViolation("matrix is not Hermitian within 1e-12")
    a = 0.5 * (a + a.conj().T)
    # Jacobi beats the LAPACK call overhead only for two-qubit sizes
    if a.shape[0] <= JACOBI_MAX_DIM:
        return kernels.jacobi_eigh(a)
    return np.linalg.eigh(a)


def eigvalsh(a) -> np.ndarray:
    return hermitian_eigen(a)[0]


def trace_norm(a) -> float:
    return float(np.sum(np.abs(eigvalsh(a))))


def _entropy_bits(eigenvalues) -> float:
    lam = np.asarray(eigenvalues, dtype=float)
    lam = lam[lam > 0.0]
    return float(max(0.0, -np.sum(lam * np.log2(lam))))


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalised state vector, optionally tagged with subsystem labels."""

    amplitudes: np.ndarray
    labels: tuple[str, ...] = ()
    qubits: tuple[int, ...] = ()

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).ravel()
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > ATOL:
            raise ContractViolation(f"state vector has squared norm {norm!r}, expected 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        labels, qubits = _default_layout(amps.size, self.labels, self.qubits)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "qubits", qubits)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def density(self) -> DensityMatrix:
        return DensityMatrix(self.projector(), self.labels, self.qubits)

    def overlap(self, other: PureState) -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix over labelled qubits.

    ``labels`` name the subsystems in order and ``qubits`` gives the number of
    qubits in each. Construction validates the physical invariants.
    """

    matrix: np.ndarray
    labels: tuple[str, ...] = ()
    qubits: tuple[int, ...] = ()
    eigenvalues: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ContractViolation(f"density matrix must be square, got shape {m.shape}")
        labels, qubits = _default_layout(m.shape[0], self.labels, self.qubits)
        if not is_hermitian(m):
            raise ContractViolation("density matrix is not Hermitian within 1e-12")
        tr = np.trace(m)
        if abs(tr - 1.0) > ATOL:
            raise ContractViolation(f"density matrix has trace {tr!r}, expected 1")
        w = eigvalsh(m) if m.shape[0] > 1 else np.array([m[0, 0].real])
        if w[0] < -SPECTRAL_TOL:
            raise ContractViolation(f"density matrix has negative eigenvalue {w[0]!r}")
        m.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "qubits", qubits)
        object.__setattr__(self, "eigenvalues", w)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def subsystem_dims(self) -> tuple[int, ...]:
        return tuple(2**q for q in self.qubits)

    def relabel(self, labels, qubits=None) -> DensityMatrix:
        return DensityMatrix(self.matrix, tuple(labels), tuple(qubits or self.qubits))

    def approx_equal(self, other, atol: float = ATOL) -> bool:
        other = other.matrix if isinstance(other, DensityMatrix) else other
        return allclose(self.matrix, other, atol)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def _default_layout(dim, labels, qubits):
    n = int(dim).bit_length() - 1
    if dim < 1 or 2**n != dim:
        raise ContractViolation(f"dimension {dim} is not a power of two")
    labels = tuple(labels)
    qubits = tuple(int(q) for q in qubits)
    if not labels:
        labels = tuple(f"q{i}" for i in range(n))
        qubits = (1,) * n
    elif not qubits:
        if n % len(labels):
            raise ContractViolation(f"cannot split {n} qubits evenly over {labels}")
        qubits = (n // len(labels),) * len(labels)
    if len(qubits) != len(labels) or sum(qubits) != n or any(q < 0 for q in qubits):
        raise ContractViolation(f"subsystems {dict(zip(labels, qubits))} do not match dimension {dim}")
    if len(set(labels)) != len(labels):
        raise ContractViolation(f"duplicate subsystem labels {labels}")
    return labels, qubits


def _qubit_axes(rho: DensityMatrix, wanted) -> list[int]:
    """Qubit indices (0 = most significant) belonging to the labels in ``wanted``."""
    unknown = set(wanted) - set(rho.labels)
    if unknown:
        raise ConfigurationError(f"unknown subsystem label(s) {sorted(unknown)}; have {rho.labels}")
    axes, start = [], 0
    for label, q in zip(rho.labels, rho.qubits):
        if label in wanted:
            axes.extend(range(start, start + q))
        start += q
    return axes


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduce ``rho`` to the subsystems named in ``keep`` (original order kept)."""
    keep = {keep} if isinstance(keep, str) else set(keep)
    keep_axes = _qubit_axes(rho, keep)
    n = sum(rho.qubits)
    drop_axes = [i for i in range(n) if i not in keep_axes]
    t = np.asarray(rho.matrix).reshape((2,) * (2 * n))
    # contract each dropped bra axis with its ket axis
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    ket = list(letters[:n])
    bra = list(letters[n:2 * n])
    for i in drop_axes:
        bra[i] = ket[i]
    out = "".join(ket[i] for i in keep_axes) + "".join(bra[i] for i in keep_axes)
    reduced = np.einsum("".join(ket) + "".join(bra) + "->" + out, t)
    d = 2 ** len(keep_axes)
    labels = tuple(l for l in rho.labels if l in keep)
    qubits = tuple(q for l, q in zip(rho.labels, rho.qubits) if l in keep)
    return DensityMatrix(reduced.reshape(d, d), labels, qubits)


def partial_transpose(rho: DensityMatrix, flip: str) -> np.ndarray:
    """Transpose the indices of subsystem ``flip`` only."""
    axes = _qubit_axes(rho, {flip})
    n = sum(rho.qubits)
    perm = list(range(2 * n))
    for i in axes:
        perm[i], perm[n + i] = n + i, i
    t = np.asarray(rho.matrix).reshape((2,) * (2 * n)).transpose(perm)
    return np.ascontiguousarray(t.reshape(rho.dim, rho.dim))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy in bits, with 0 log 0 = 0."""
    return min(_entropy_bits(rho.eigenvalues), float(np.log2(rho.dim)))


def tensor(*states: DensityMatrix) -> DensityMatrix:
    """Tensor product of density matrices, concatenating their labels."""
    m = np.ones((1, 1), dtype=np.complex128)
    labels, qubits = (), ()
    for s in states:
        m = np.kron(m, s.matrix)
        labels += s.labels
        qubits += s.qubits
    return DensityMatrix(m, labels, qubits)
