"""(m, n) redundant quantum parity code: encode, relay through n nodes, decode.

A logical qubit a|0> + b|1> becomes a|X+>^n + b|X->^n with
|X+-> = (|0..0> +- |1..1>)/sqrt(2) on blocks of m qubits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import ContractViolation, DecodeError, InvalidParameter
from .linalg import ATOL, PureState


@dataclass(frozen=True)
class CodeParams:
    m: int = 1
    n: int = 1

    def __post_init__(self):
        for name in ("m", "n"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or isinstance(v, bool) or not 1 <= v <= 3:
                raise InvalidParameter(f"code parameter {name} must be an integer in 1..3, got {v!r}")

    @property
    def n_qubits(self) -> int:
        return self.m * self.n


class ChannelMode(str, Enum):
    NOISELESS = "noiseless"
    BLOCK_ERASURE = "block-erasure"


@dataclass(frozen=True)
class ChannelModel:
    mode: ChannelMode = ChannelMode.NOISELESS
    erasure_probability: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "mode", ChannelMode(self.mode))
        p = float(self.erasure_probability)
        if not 0.0 <= p <= 1.0:
            raise InvalidParameter(f"erasure probability must lie in [0, 1], got {p!r}")
        object.__setattr__(self, "erasure_probability", p)


NOISELESS = ChannelModel()


@dataclass(frozen=True)
class TransferOutcome:
    """What reached the receiver: the state plus a per-block erasure mask."""

    state: PureState
    erased: tuple[bool, ...]
    hop_log: tuple[tuple[str, float], ...]

    @property
    def delivered(self) -> bool:
        return not any(self.erased)


@lru_cache(maxsize=None)
def _logical_basis(m: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    block = 2**m
    plus = np.zeros(block, dtype=np.complex128)
    minus = np.zeros(block, dtype=np.complex128)
    plus[0] = minus[0] = 1 / math.sqrt(2)
    plus[-1] = 1 / math.sqrt(2)
    minus[-1] = -1 / math.sqrt(2)
    zero_l, one_l = np.ones(1, dtype=np.complex128), np.ones(1, dtype=np.complex128)
    for _ in range(n):
        zero_l = np.kron(zero_l, plus)
        one_l = np.kron(one_l, minus)
    zero_l.setflags(write=False)
    one_l.setflags(write=False)
    return zero_l, one_l


def encode(alpha: complex, beta: complex, params: CodeParams) -> PureState:
    norm = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm - 1.0) > ATOL:
        raise InvalidParameter(f"|alpha|^2 + |beta|^2 = {norm!r}, expected 1")
    zero_l, one_l = _logical_basis(params.m, params.n)
    labels = tuple(f"B{i + 1}" for i in range(params.n))
    return PureState(alpha * zero_l + beta * one_l, labels, (params.m,) * params.n)


def transfer(state: PureState, channel: ChannelModel, n_nodes: int,
             hop_delay: float = 0.0, start: float = 0.0) -> TransferOutcome:
    """Relay ``state`` through ``n_nodes`` pass-through nodes.

    Under block erasure every block is lost independently with the channel's
    probability; the generator is seeded from the channel so repeated calls
    give the same pattern.
    """
    if n_nodes < 0:
        raise InvalidParameter(f"number of transfer nodes must be >= 0, got {n_nodes!r}")
    hops = tuple((f"N{i + 1}", start + (i + 1) * hop_delay) for i in range(n_nodes))
    blocks = len(state.qubits)
    if channel.mode is ChannelMode.BLOCK_ERASURE:
        rng = np.random.default_rng(channel.rng_seed)
        erased = tuple(bool(e) for e in rng.random(blocks) < channel.erasure_probability)
    else:
        erased = (False,) * blocks
    return TransferOutcome(state, erased, hops)


def decode(outcome: TransferOutcome, params: CodeParams) -> tuple[complex, complex]:
    """Recover (alpha, beta), phase-fixed so alpha is real and non-negative.

    Raises DecodeError if any block was erased or the state left the code space.
    """
    if not outcome.delivered:
        lost = [i + 1 for i, e in enumerate(outcome.erased) if e]
        raise DecodeError(f"blocks {lost} erased in transit")
    amps = outcome.state.amplitudes
    zero_l, one_l = _logical_basis(params.m, params.n)
    if amps.size != zero_l.size:
        raise ContractViolation(f"received {amps.size} amplitudes, code ({params.m},{params.n}) expects {zero_l.size}")
    alpha = complex(np.vdot(zero_l, amps))
    beta = complex(np.vdot(one_l, amps))
    weight = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(weight - 1.0) > 1e-10:
        raise DecodeError(f"received state has weight {weight:.3e} outside the code space")
    if abs(alpha) > 0:
        phase = abs(alpha) / alpha
        alpha, beta = complex(abs(alpha)), beta * phase
    elif abs(beta) > 0:
        beta = complex(abs(beta))
    return alpha, beta
