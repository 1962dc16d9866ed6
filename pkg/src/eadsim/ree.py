"""Numerical relative entropy of entanglement for two qubits.

The separable candidate is a mixture of ``k`` pure product states
(any separable two-qubit state is a mixture of at most four), mixed with a
tiny multiple of the identity to keep its logarithm finite:

    sigma = (1 - floor) * sum_k p_k |a_k b_k><a_k b_k| + floor * I/4

Each |a_k> and |b_k> is a Bloch-sphere point (theta, phi) and the weights are
p_k = u_k^2 / sum u^2, so every parameter is unconstrained. D(rho||sigma) and
its exact gradient come from ``kernels.separable_objective``; L-BFGS runs from
``restarts`` random starts and the best end point is kept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import kernels as _selected_kernels
from .errors import ContractViolation, InvalidParameter
from .linalg import DensityMatrix, hermitian_eigen

FLOOR = 1e-10
MAX_ITERATIONS = 10_000


@dataclass(frozen=True, eq=False)
class SeparableAnsatz:
    weights: np.ndarray
    local_states: tuple[tuple[np.ndarray, np.ndarray], ...]

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise InvalidParameter("ansatz weights must form a probability vector")
        if len(self.local_states) != w.size:
            raise InvalidParameter("one pair of local states per weight")

    def density(self) -> DensityMatrix:
        m = sum(p * np.kron(a, b) for p, (a, b) in zip(self.weights, self.local_states))
        return DensityMatrix(m, ("A", "B"))

    @classmethod
    def from_parameters(cls, x, floor: float = FLOOR) -> SeparableAnsatz:
        params = np.asarray(x, dtype=float).reshape(-1, 5)
        u2 = params[:, 4] ** 2
        weights = list((1.0 - floor) * u2 / u2.sum())
        states = []
        for ta, fa, tb, fb, _ in params:
            a = np.array([math.cos(ta / 2), np.exp(1j * fa) * math.sin(ta / 2)])
            b = np.array([math.cos(tb / 2), np.exp(1j * fb) * math.sin(tb / 2)])
            states.append((np.outer(a, a.conj()), np.outer(b, b.conj())))
        if floor > 0:
            weights.append(floor)
            states.append((np.eye(2) / 2, np.eye(2) / 2))
        return cls(np.array(weights), tuple(states))


@dataclass(frozen=True, eq=False)
class ReeResult:
    value: float
    closest_separable: DensityMatrix
    ansatz: SeparableAnsatz
    iterations: int
    converged: bool
    history: tuple[float, ...] = ()


def _random_start(rng: np.random.Generator, k: int) -> np.ndarray:
    return np.column_stack([
        np.arccos(rng.uniform(-1.0, 1.0, k)),
        rng.uniform(0.0, 2 * math.pi, k),
        np.arccos(rng.uniform(-1.0, 1.0, k)),
        rng.uniform(0.0, 2 * math.pi, k),
        rng.uniform(0.5, 1.5, k),
    ]).ravel()


def ree_numeric(rho: DensityMatrix, k: int = 16, restarts: int = 8, seed: int = 0,
                kernels=None, ftol: float = 1e-10, gtol: float = 1e-9) -> ReeResult:
    """Minimise D(rho||sigma) over separable sigma; value in bits.

    ``iterations`` sums optimizer iterations over all restarts and is capped
    at 10,000; ``converged`` is False if the cap was hit or the best run did
    not meet its stopping test. ``history`` is the objective after each
    iteration of the winning run.
    """
    if rho.dim != 4:
        raise ContractViolation(f"ree_numeric needs a two-qubit state, got dimension {rho.dim}")
    if k < 4:
        raise InvalidParameter(f"ansatz needs k >= 4 product components, got {k}")
    if restarts < 1:
        raise InvalidParameter(f"restarts must be >= 1, got {restarts}")
    kern = kernels or _selected_kernels
    target = np.ascontiguousarray(rho.matrix)
    w, _ = hermitian_eigen(target)
    w = w[w > 0]
    entropy_term = float(np.sum(w * np.log(w)))

    def objective(x):
        return kern.separable_objective(x, target, entropy_term, FLOOR)

    rng = np.random.default_rng(seed)
    best, best_history = None, ()
    total = 0
    for _ in range(restarts):
        budget = MAX_ITERATIONS - total
        if budget <= 0:
            break
        x0 = _random_start(rng, k)
        history = [objective(x0)[0]]
        res = minimize(objective, x0, jac=True, method="L-BFGS-B",
                       callback=lambda xk: history.append(objective(xk)[0]),
                       options={"maxiter": budget, "ftol": ftol, "gtol": gtol})
        total += res.nit
        if best is None or res.fun < best.fun:
            best, best_history = res, tuple(history)
    sigma = DensityMatrix(kern.mix_product_states(best.x, FLOOR), ("A", "B"))
    return ReeResult(
        value=float(best.fun),
        closest_separable=sigma,
        ansatz=SeparableAnsatz.from_parameters(best.x, FLOOR),
        iterations=total,
        converged=bool(best.success) and total < MAX_ITERATIONS,
        history=best_history,
    )
