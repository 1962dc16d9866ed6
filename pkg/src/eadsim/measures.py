"""Two-qubit correlation and entanglement quantifiers (all logs base 2)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, DomainError, InvalidParameter
from .linalg import (
    SPECTRAL_TOL,
    DensityMatrix,
    hermitian_eigen,
    partial_trace,
    partial_transpose,
    trace_norm,
    von_neumann_entropy,
)
from .states import PAULI_Y, PAULIS

BELL_TOL = 1e-10
QUARTER_PI = math.pi / 4
_PAULI_PAIRS = np.array([[np.kron(a, b) for b in PAULIS] for a in PAULIS])


def _two_qubit(rho: DensityMatrix, what: str) -> None:
    if rho.dim != 4 or len(rho.labels) != 2:
        raise ContractViolation(f"{what} needs a bipartite two-qubit state, got labels {rho.labels}")


def binary_entropy(p: float) -> float:
    return -sum(q * math.log2(q) for q in (p, 1.0 - p) if q > 0.0)


def negativity(rho: DensityMatrix, cut: str | None = None) -> float:
    """(||rho^T_cut||_1 - 1)/2; ``cut`` defaults to the second subsystem."""
    if len(rho.labels) != 2:
        raise ContractViolation(f"negativity needs a bipartite state, got labels {rho.labels}")
    cut = rho.labels[1] if cut is None else cut
    return max(0.5 * (trace_norm(partial_transpose(rho, cut)) - 1.0), 0.0)


def quantum_relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """D(rho||sigma) = Tr rho log rho - Tr rho log sigma; ``math.inf`` off support."""
    if rho.dim != sigma.dim:
        raise ContractViolation(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    w_r, v_r = hermitian_eigen(rho.matrix)
    w_s, v_s = hermitian_eigen(sigma.matrix)
    keep_r = w_r > SPECTRAL_TOL
    first = float(np.sum(w_r[keep_r] * np.log2(w_r[keep_r])))
    # overlaps[i, j] = |<r_i|s_j>|^2, restricted to the support of rho
    overlaps = np.abs(v_r[:, keep_r].conj().T @ v_s) ** 2
    weight = w_r[keep_r] @ overlaps
    null = w_s <= SPECTRAL_TOL
    if np.any(weight[null] > SPECTRAL_TOL):
        return math.inf
    second = float(np.sum(weight[~null] * np.log2(w_s[~null])))
    value = first - second
    return 0.0 if -1e-9 < value < 0.0 else value


def correlation_matrix(rho: DensityMatrix) -> np.ndarray:
    """T[i, j] = Tr(rho sigma_i (x) sigma_j) over x, y, z."""
    _two_qubit(rho, "correlation_matrix")
    return np.einsum("ij,abji->ab", rho.matrix, _PAULI_PAIRS).real


@dataclass(frozen=True)
class BellSpectrum:
    """Correlation coefficients c1..c3 and Bell-basis weights lambda_ab."""

    c: tuple[float, float, float]
    lambdas: dict

    def __post_init__(self):
        lam = np.array(list(self.lambdas.values()))
        if np.any(lam < -BELL_TOL) or abs(lam.sum() - 1.0) > BELL_TOL:
            raise DomainError(f"coefficients {self.c} do not describe a valid Bell-diagonal state")

    @classmethod
    def from_correlations(cls, c) -> BellSpectrum:
        c1, c2, c3 = (float(x) for x in c)
        lambdas = {
            (a, b): 0.25 * (1 + (-1) ** a * c1 - (-1) ** (a + b) * c2 + (-1) ** b * c3)
            for a in (0, 1) for b in (0, 1)
        }
        return cls((c1, c2, c3), lambdas)

    @property
    def max_lambda(self) -> float:
        return max(self.lambdas.values())


def bell_diagonal_decomposition(rho: DensityMatrix, align: bool = False) -> BellSpectrum:
    """Bell-diagonal coefficients of a two-qubit state with maximally mixed marginals.

    With ``align=True`` the correlation matrix is first brought to diagonal form
    by local rotations (signed SVD), which leaves every entanglement measure
    unchanged; otherwise off-diagonal correlations are rejected.
    """
    _two_qubit(rho, "bell_diagonal_decomposition")
    for label in rho.labels:
        reduced = partial_trace(rho, {label}).matrix
        if np.max(np.abs(reduced - 0.5 * np.eye(2))) > BELL_TOL:
            raise DomainError(f"reduction onto {label} is not maximally mixed; state is not Bell-diagonal")
    t = correlation_matrix(rho)
    if align:
        u, s, vt = np.linalg.svd(t)
        if np.linalg.det(u) * np.linalg.det(vt) < 0:
            s[-1] = -s[-1]
        # remaining sign freedom: two simultaneous flips keep both rotations proper
        c = s
    else:
        off = t - np.diag(np.diag(t))
        if np.max(np.abs(off)) > BELL_TOL:
            raise DomainError("correlation matrix has off-diagonal terms; state is not Bell-diagonal "
                              "in the computational Bell basis (try align=True)")
        c = np.diag(t)
    return BellSpectrum.from_correlations(c)


def ree_closed_form(spectrum: BellSpectrum) -> float:
    """Relative entropy of entanglement of a Bell-diagonal state, in bits."""
    lam = spectrum.max_lambda
    return 0.0 if lam <= 0.5 else 1.0 - binary_entropy(min(lam, 1.0))


def concurrence(rho: DensityMatrix) -> float:
    """Wootters concurrence from the singular values of W^T (Y (x) Y) W,
    where the columns of W are the eigenvectors of rho scaled by sqrt(weight)."""
    _two_qubit(rho, "concurrence")
    w, v = hermitian_eigen(rho.matrix)
    keep = w > 1e-13
    vecs = v[:, keep] * np.sqrt(w[keep])
    tau = vecs.T @ np.kron(PAULI_Y, PAULI_Y) @ vecs
    s = np.sort(np.linalg.svd(tau, compute_uv=False))[::-1] if tau.size else np.zeros(1)
    return float(min(1.0, max(0.0, s[0] - np.sum(s[1:]))))


def tangle(rho: DensityMatrix) -> float:
    """Squared concurrence."""
    return concurrence(rho) ** 2


def oscillation_metric(phase: float) -> float:
    """sin^2(2 * phase): the entanglement reached after applying U_AC for ``phase``."""
    return math.sin(2.0 * phase) ** 2


def schedule_metric(x: float) -> float:
    """Entanglement sin^2(2(pi/4 + x)) promised to a pair with timing offset ``x``."""
    if not -QUARTER_PI - 1e-12 <= x <= QUARTER_PI + 1e-12:
        raise InvalidParameter(f"timing offset {x!r} outside [-pi/4, pi/4]")
    return oscillation_metric(QUARTER_PI + x)


def quantum_mutual_information(rho: DensityMatrix) -> float:
    _two_qubit(rho, "quantum_mutual_information")
    a, b = rho.labels
    return (von_neumann_entropy(partial_trace(rho, {a})) + von_neumann_entropy(partial_trace(rho, {b}))
            - von_neumann_entropy(rho))


def bell_mutual_information(spectrum: BellSpectrum) -> float:
    """sum lambda log2(4 lambda); equals the mutual information for Bell-diagonal states."""
    return float(sum(l * math.log2(4 * l) for l in spectrum.lambdas.values() if l > 0))


def classical_correlation(spectrum: BellSpectrum) -> float:
    """1 - H((1+c)/2) with c the largest |c_j|."""
    c = min(1.0, max(abs(x) for x in spectrum.c))
    return 1.0 - binary_entropy((1.0 + c) / 2.0)


def ree(rho: DensityMatrix) -> float:
    """Closed-form REE for states locally equivalent to a Bell-diagonal state."""
    return ree_closed_form(bell_diagonal_decomposition(rho, align=True))
