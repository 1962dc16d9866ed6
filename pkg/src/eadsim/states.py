"""Canonical states and operators of the core distribution protocol.

Alice holds A and the ancilla C, Bob holds B. The interaction
``H = X_A X_C`` is switched on for a phase ``t`` and rotates the separable
mixture of Bell states into a maximally entangled AB pair at ``t = pi/4``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ContractViolation, InvalidParameter
from .linalg import DensityMatrix, PureState, partial_trace

SQRT_HALF = 1.0 / math.sqrt(2.0)

I2 = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)

ABC = ("A", "B", "C")


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.054571817e-34

    def __post_init__(self):
        if not self.hbar > 0:
            raise InvalidParameter(f"hbar must be positive, got {self.hbar!r}")


SI = PhysicalConstants()
NATURAL_UNITS = PhysicalConstants(hbar=1.0)


def _check_time(t: float) -> float:
    t = float(t)
    if not math.isfinite(t) or t < 0:
        raise InvalidParameter(f"evolution time must be finite and non-negative, got {t!r}")
    return t


def bell_psi_plus() -> PureState:
    return PureState([0, SQRT_HALF, SQRT_HALF, 0], ("A", "B"))


def bell_phi_plus() -> PureState:
    return PureState([SQRT_HALF, 0, 0, SQRT_HALF], ("A", "B"))


def plus_state() -> PureState:
    return PureState([SQRT_HALF, SQRT_HALF], ("C",))


def minus_state() -> PureState:
    return PureState([SQRT_HALF, -SQRT_HALF], ("C",))


def bell_state(a: int, b: int) -> PureState:
    """Bell vector (|0,b> + (-1)^a |1,1^b>)/sqrt(2)."""
    amps = np.zeros(4, dtype=np.complex128)
    amps[b] = SQRT_HALF
    amps[2 + (1 ^ b)] = (-1) ** a * SQRT_HALF
    return PureState(amps, ("A", "B"))


def initial_rho_ab() -> DensityMatrix:
    """Even mixture of |psi+> and |phi+>: Bell-diagonal and separable."""
    m = 0.5 * bell_psi_plus().projector() + 0.5 * bell_phi_plus().projector()
    return DensityMatrix(m, ("A", "B"))


def rho_c(s: float = 1.0) -> DensityMatrix:
    """Ancilla state (I + s X)/2; positive only for |s| <= 1."""
    if not abs(s) <= 1.0:
        raise InvalidParameter(f"rho_C=(I+sX)/2 is not positive for s={s!r}")
    return DensityMatrix(0.5 * (I2 + s * PAULI_X), ("C",))


@lru_cache(maxsize=1)
def prepare_abc() -> DensityMatrix:
    """Separable ABC input: |psi+><psi+| (x) |+><+| and |phi+><phi+| (x) |-><-|, evenly mixed.

    Built directly; no explicit preparation circuit on A and C is applied.
    """
    m = 0.5 * np.kron(bell_psi_plus().projector(), plus_state().projector())
    m += 0.5 * np.kron(bell_phi_plus().projector(), minus_state().projector())
    return DensityMatrix(m, ABC)


def hamiltonian_ac(embedded: bool = False) -> np.ndarray:
    """X_A X_C, either on the (A, C) pair or embedded in the A,B,C space."""
    h = np.kron(PAULI_X, PAULI_X)
    return embed_ac(h) if embedded else h


def u_ac(t: float, embedded: bool = False) -> np.ndarray:
    """exp(-i t X_A X_C) = cos(t) I - i sin(t) X_A X_C."""
    t = _check_time(t)
    u = math.cos(t) * np.eye(4, dtype=np.complex128) - 1j * math.sin(t) * np.kron(PAULI_X, PAULI_X)
    return embed_ac(u) if embedded else u


def embed_ac(op) -> np.ndarray:
    """Lift a 4x4 operator on (A, C) to the 8x8 space ordered (A, B, C), identity on B."""
    op = np.asarray(op, dtype=np.complex128)
    if op.shape != (4, 4):
        raise ContractViolation(f"expected a 4x4 operator on A,C, got {op.shape}")
    full = np.zeros((8, 8), dtype=np.complex128)
    for row in range(8):
        a, b, c = row >> 2, (row >> 1) & 1, row & 1
        for col in range(8):
            a2, b2, c2 = col >> 2, (col >> 1) & 1, col & 1
            if b == b2:
                full[row, col] = op[2 * a + c, 2 * a2 + c2]
    return full


def energy_for_time(t: float, constants: PhysicalConstants = SI) -> float:
    """Interaction energy hbar*pi/(4t) that reaches maximal entanglement at ``t``."""
    t = _check_time(t)
    if t == 0:
        raise InvalidParameter("zero application time needs infinite energy")
    return constants.hbar * math.pi / (4.0 * t)


def evolve_abc(rho: DensityMatrix, t: float) -> DensityMatrix:
    """Apply U_AC(t) (x) I_B to a three-qubit A,B,C state."""
    if rho.dim != 8 or rho.labels != ABC:
        raise ContractViolation(f"evolve_abc needs a state over {ABC}, got {rho.labels} (dim {rho.dim})")
    u = u_ac(t, embedded=True)
    out = u @ rho.matrix @ u.conj().T
    return DensityMatrix(0.5 * (out + out.conj().T), ABC, rho.qubits)


def evolved_ab(t: float) -> DensityMatrix:
    """AB reduction of the protocol state after phase ``t``."""
    return partial_trace(evolve_abc(prepare_abc(), t), {"A", "B"})


def xi_state(t: float = math.pi / 4) -> PureState:
    """cos(t)|psi+> - i sin(t)|phi+>; the AB output at t = pi/4."""
    amps = math.cos(t) * bell_psi_plus().amplitudes - 1j * math.sin(t) * bell_phi_plus().amplitudes
    return PureState(amps, ("A", "B"))
