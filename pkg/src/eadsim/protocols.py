"""Core distribution protocol and the two differentiation services.

Phase 1 is the classical distribution of timing directives by the encoder
unit. Phase 2 runs the core protocol per user pair for the directed phase.

Wall-clock time maps to Hamiltonian phase as ``theta(t) = pi * t / T_pi`` for
a pair with oscillation period ``T_pi``, so maximal entanglement
(theta = pi/4) is reached at ``T_pi / 4``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .errors import DecodeError, InvalidParameter, SessionFailure
from .linalg import DensityMatrix, partial_trace
from .measures import negativity, oscillation_metric, ree, schedule_metric, tangle
from .parity import NOISELESS, ChannelModel, CodeParams, decode, encode, transfer
from .states import evolve_abc, evolved_ab, prepare_abc

QUARTER_PI = math.pi / 4


class Mode(str, Enum):
    AMOUNT = "amount"
    TIME_DOMAIN = "time-domain"


@dataclass(frozen=True)
class UserPair:
    pair_id: str
    transmit_user: str
    receive_user: str
    priority: int = 1

    def __post_init__(self):
        if not isinstance(self.priority, (int, np.integer)) or self.priority < 1:
            raise InvalidParameter(f"pair {self.pair_id}: priority must be an integer >= 1, got {self.priority!r}")


@dataclass(frozen=True)
class TimingDirective:
    """Phase-1 payload for one pair: an offset (amount mode) or a period (time-domain mode)."""

    pair_id: str
    mode: Mode
    x_offset: float | None = None
    oscillation_period: float | None = None
    issued_at: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.mode is Mode.AMOUNT:
            if self.x_offset is None or self.oscillation_period is not None:
                raise InvalidParameter("amount-mode directive carries x_offset only")
            if not -QUARTER_PI <= self.x_offset <= QUARTER_PI:
                raise InvalidParameter(f"x_offset {self.x_offset!r} outside [-pi/4, pi/4]")
        else:
            if self.oscillation_period is None or self.x_offset is not None:
                raise InvalidParameter("time-domain directive carries oscillation_period only")
            if not self.oscillation_period > 0:
                raise InvalidParameter(f"oscillation period must be positive, got {self.oscillation_period!r}")

    @property
    def application_phase(self) -> float:
        """Phase T_U = x + pi/4 (amount) or pi/4 (time-domain)."""
        return QUARTER_PI + self.x_offset if self.mode is Mode.AMOUNT else QUARTER_PI

    def to_dict(self) -> dict:
        d = asdict(self)
        d["mode"] = self.mode.value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> TimingDirective:
        return cls(**d)


@dataclass(frozen=True)
class ClassicalMessage:
    recipient: str
    directive: TimingDirective
    sent_at: float
    delivered_at: float

    def to_json(self) -> str:
        return json.dumps({
            "recipient": self.recipient,
            "directive": self.directive.to_dict(),
            "sent_at": self.sent_at,
            "delivered_at": self.delivered_at,
        }, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> ClassicalMessage:
        d = json.loads(text)
        return cls(d["recipient"], TimingDirective.from_dict(d["directive"]), d["sent_at"], d["delivered_at"])


@dataclass(frozen=True, eq=False)
class SessionResult:
    pair_id: str
    applied_time: float
    wall_clock_completion: float
    final_ab_state: DensityMatrix
    schedule_metric: float
    tangle: float
    ree: float
    negativity: float
    unitary_start: float = 0.0
    hop_log: tuple = ()


@dataclass(frozen=True)
class TraceSample:
    wall_clock: float
    schedule_metric: float
    tangle: float
    negativity: float
    ree: float


@dataclass(frozen=True)
class EntanglementTrace:
    pair_id: str
    samples: tuple[TraceSample, ...] = field(default_factory=tuple)


def phase_at(wall_clock: float, period: float) -> float:
    return math.pi * wall_clock / period


def wall_clock_for_phase(phase: float, period: float) -> float:
    return phase * period / math.pi


def run_core_protocol(pair: UserPair, t: float, code: CodeParams = CodeParams(),
                      channel: ChannelModel = NOISELESS, n_nodes: int = 1,
                      payload: tuple[complex, complex] = (1.0, 0.0),
                      period: float | None = None, hop_delay: float = 0.0,
                      start: float = 0.0) -> SessionResult:
    """Steps 1-3 for one pair: relay B through the parity code, prepare ABC, evolve for phase ``t``.

    ``payload`` is the logical amplitude pair carried by the code; delivery
    has to reproduce it or the session fails. The transfer leaves at
    ``start``; the unitary starts after the last hop and, given the pair's
    oscillation ``period``, runs for ``t * period / pi`` seconds.
    """
    sent = encode(*payload, code)
    outcome = transfer(sent, channel, n_nodes, hop_delay=hop_delay, start=start)
    try:
        alpha, beta = decode(outcome, code)
    except DecodeError as exc:
        raise SessionFailure(f"pair {pair.pair_id}: {exc}", pair.pair_id, outcome.hop_log) from exc
    expected = decode(transfer(sent, NOISELESS, 0), code)
    if abs(alpha - expected[0]) > 1e-12 or abs(beta - expected[1]) > 1e-12:
        raise SessionFailure(f"pair {pair.pair_id}: delivered qubit differs from the sent one",
                             pair.pair_id, outcome.hop_log)

    unitary_start = outcome.hop_log[-1][1] if outcome.hop_log else start
    done = unitary_start + wall_clock_for_phase(t, period) if period else float("nan")
    ab = partial_trace(evolve_abc(prepare_abc(), t), {"A", "B"})
    return SessionResult(
        pair_id=pair.pair_id,
        applied_time=t,
        wall_clock_completion=done,
        final_ab_state=ab,
        schedule_metric=oscillation_metric(t),
        tangle=tangle(ab),
        ree=ree(ab),
        negativity=negativity(ab),
        unitary_start=unitary_start,
        hop_log=outcome.hop_log,
    )


def invert_schedule_metric(target: float, branch: str = "short") -> float:
    """Offset x with sin^2(2(pi/4 + x)) = target.

    ``branch="short"`` picks x in [-pi/4, 0] (shorter unitary application),
    ``"long"`` the mirror solution in [0, pi/4].
    """
    if not 0.0 <= target <= 1.0:
        raise InvalidParameter(f"entanglement target {target!r} outside [0, 1]")
    half_angle = 0.5 * math.asin(math.sqrt(target))
    if branch == "short":
        return half_angle - QUARTER_PI
    if branch == "long":
        return QUARTER_PI - half_angle
    raise InvalidParameter(f"unknown branch {branch!r}; use 'short' or 'long'")


def plan_amount_differentiation(pairs: Sequence[UserPair], targets: Sequence[float],
                                branch: str = "short", issued_at: float = 0.0) -> list[TimingDirective]:
    if len(pairs) != len(targets):
        raise InvalidParameter(f"{len(pairs)} pairs but {len(targets)} targets")
    return [TimingDirective(p.pair_id, Mode.AMOUNT, x_offset=invert_schedule_metric(tg, branch), issued_at=issued_at)
            for p, tg in zip(pairs, targets)]


def linear_rank_period(pair: UserPair, base_period: float) -> float:
    return base_period * pair.priority


def plan_time_differentiation(pairs: Sequence[UserPair], base_period: float,
                              period_for: Callable[[UserPair, float], float] = linear_rank_period,
                              issued_at: float = 0.0) -> list[TimingDirective]:
    """Per-pair oscillation periods; with the default mapping priority 1 gets the shortest."""
    if not base_period > 0:
        raise InvalidParameter(f"base period must be positive, got {base_period!r}")
    return [TimingDirective(p.pair_id, Mode.TIME_DOMAIN, oscillation_period=period_for(p, base_period),
                            issued_at=issued_at) for p in pairs]


def encoder_distribute(directives: Sequence[TimingDirective], latency: float,
                       pairs: Sequence[UserPair] | None = None) -> list[ClassicalMessage]:
    """Send each directive to both endpoints of its pair over a reliable channel."""
    if latency < 0:
        raise InvalidParameter(f"latency must be >= 0, got {latency!r}")
    by_id = {p.pair_id: p for p in pairs or ()}
    messages = []
    for d in directives:
        pair = by_id.get(d.pair_id)
        ends = (pair.transmit_user, pair.receive_user) if pair else (f"U:{d.pair_id}", f"B:{d.pair_id}")
        for recipient in ends:
            messages.append(ClassicalMessage(recipient, d, d.issued_at, d.issued_at + latency))
    return messages


def _sessions(pairs, directives, period_of, start_times, session_options, failures):
    results = []
    for pair, d in zip(pairs, directives):
        opts = dict(session_options(pair) if callable(session_options) else session_options or {})
        opts.setdefault("start", (start_times or {}).get(pair.pair_id, 0.0))
        try:
            res = run_core_protocol(pair, d.application_phase, period=period_of(d), **opts)
        except SessionFailure as exc:
            if failures is None:
                raise
            failures.append(exc)
            continue
        results.append(res)
    return results


def run_protocol1(pairs: Sequence[UserPair], targets: Sequence[float], global_period: float,
                  readout: str = "own", branch: str = "short", start_times: dict | None = None,
                  session_options=None, failures: list | None = None) -> list[SessionResult]:
    """Differentiation in the amount of entanglement under one shared period.

    ``readout="own"`` reports each pair when its unitary stops;
    ``"global"`` reports every pair at the latest stop time.
    ``start_times`` maps pair ids to transfer start times; ``session_options``
    (a dict, or a callable taking the pair) is forwarded to
    :func:`run_core_protocol`. Failed sessions raise unless a ``failures``
    list is given to collect them.
    """
    if not global_period > 0:
        raise InvalidParameter(f"global period must be positive, got {global_period!r}")
    if readout not in ("own", "global"):
        raise InvalidParameter(f"unknown readout {readout!r}; use 'own' or 'global'")
    directives = plan_amount_differentiation(pairs, targets, branch)
    results = _sessions(pairs, directives, lambda d: global_period, start_times, session_options, failures)
    by_id = {d.pair_id: d for d in directives}
    results = [replace(r, schedule_metric=schedule_metric(by_id[r.pair_id].x_offset)) for r in results]
    if readout == "global" and results:
        instant = max(r.wall_clock_completion for r in results)
        results = [replace(r, wall_clock_completion=instant) for r in results]
    return sorted(results, key=lambda r: r.pair_id)


def run_protocol2(pairs: Sequence[UserPair], base_period: float,
                  period_for: Callable[[UserPair, float], float] = linear_rank_period,
                  start_times: dict | None = None, session_options=None,
                  failures: list | None = None) -> list[SessionResult]:
    """Differentiation in the time domain: every pair reaches maximal entanglement at T_pi/4."""
    directives = plan_time_differentiation(pairs, base_period, period_for)
    results = _sessions(pairs, directives, lambda d: d.oscillation_period, start_times, session_options, failures)
    return sorted(results, key=lambda r: r.pair_id)


def directive_period(directive: TimingDirective, global_period: float | None = None) -> float:
    if directive.mode is Mode.TIME_DOMAIN:
        return directive.oscillation_period
    if global_period is None or not global_period > 0:
        raise InvalidParameter("amount-mode traces need a positive global period")
    return global_period


def entanglement_trace(pair: UserPair, directive: TimingDirective, t_grid: Sequence[float],
                       global_period: float | None = None, hold: bool = False) -> EntanglementTrace:
    """Sample the pair's measures at wall-clock times measured from unitary start.

    By default the interaction keeps running, so the trace is periodic in
    T_pi. With ``hold=True`` it stops at the directive's application phase.
    """
    grid = np.asarray(t_grid, dtype=float)
    if grid.size and np.any(np.diff(grid) < 0):
        raise InvalidParameter("trace grid must be sorted ascending")
    period = directive_period(directive, global_period)
    stop = directive.application_phase
    samples = []
    for t in grid:
        phase = phase_at(float(t), period)
        if hold:
            phase = min(phase, stop)
        ab = evolved_ab(phase)
        samples.append(TraceSample(float(t), oscillation_metric(phase), tangle(ab), negativity(ab), ree(ab)))
    return EntanglementTrace(pair.pair_id, tuple(samples))
