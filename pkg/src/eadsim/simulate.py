"""Discrete-event execution of a scenario.

Phase 1 events (directive issue and delivery to both endpoints) are
scheduled first. Each pair's Phase 2 session starts once both endpoints
hold the directive; its hops, unitary window and completion are then
placed on the same timeline. Ties at equal timestamps resolve by event
kind order, then by pair order in the scenario.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import SessionFailure
from .parity import ChannelModel
from .protocols import (
    EntanglementTrace,
    Mode,
    SessionResult,
    encoder_distribute,
    entanglement_trace,
    plan_amount_differentiation,
    plan_time_differentiation,
    run_protocol1,
    run_protocol2,
)
from .scenario import ScenarioConfig

EVENT_KINDS = (
    "directive-issued",
    "directive-delivered",
    "quantum-hop",
    "unitary-start",
    "unitary-end",
    "session-complete",
    "session-failed",
)
_KIND_RANK = {k: i for i, k in enumerate(EVENT_KINDS)}


@dataclass(frozen=True)
class Event:
    timestamp: float
    pair_id: str
    kind: str
    payload: dict = field(default_factory=dict, compare=False)


@dataclass
class EventTimeline:
    events: list[Event] = field(default_factory=list)

    def for_pair(self, pair_id: str) -> list[Event]:
        return [e for e in self.events if e.pair_id == pair_id]

    def first(self, pair_id: str, kind: str) -> Event | None:
        return next((e for e in self.events if e.pair_id == pair_id and e.kind == kind), None)


@dataclass
class ScenarioRun:
    timeline: EventTimeline
    results: list[SessionResult]
    traces: list[EntanglementTrace]
    failures: list[SessionFailure]
    directives: list


class _Scheduler:
    def __init__(self, pair_order):
        self._heap = []
        self._counter = itertools.count()
        self._order = pair_order

    def push(self, timestamp, pair_id, kind, **payload):
        key = (timestamp, _KIND_RANK[kind], self._order[pair_id], next(self._counter))
        heapq.heappush(self._heap, (key, Event(timestamp, pair_id, kind, payload)))

    def drain(self):
        while self._heap:
            yield heapq.heappop(self._heap)[1]


def pair_seed(seed: int, index: int) -> int:
    """Independent per-pair channel seed derived from the scenario seed."""
    return int(np.random.SeedSequence([int(seed), index]).generate_state(1)[0])


def plan(config: ScenarioConfig) -> list:
    if config.mode is Mode.AMOUNT:
        return plan_amount_differentiation(config.pairs, config.targets, config.branch)
    return plan_time_differentiation(config.pairs, config.base_period)


def run_scenario(config: ScenarioConfig) -> ScenarioRun:
    """Run every pair of ``config``; failed sessions are logged and skipped."""
    order = {p.pair_id: i for i, p in enumerate(config.pairs)}
    sched = _Scheduler(order)
    directives = plan(config)
    messages = encoder_distribute(directives, config.classical_latency, config.pairs)

    delivered_at = {}
    for d in directives:
        sched.push(d.issued_at, d.pair_id, "directive-issued", directive=d.to_dict())
    for msg in messages:
        pid = msg.directive.pair_id
        sched.push(msg.delivered_at, pid, "directive-delivered", recipient=msg.recipient)
        delivered_at[pid] = max(delivered_at.get(pid, msg.delivered_at), msg.delivered_at)

    base_seed = config.channel.rng_seed

    def options(pair):
        channel = ChannelModel(config.channel.mode, config.channel.erasure_probability,
                               pair_seed(base_seed, order[pair.pair_id]))
        return {"code": config.code, "channel": channel, "n_nodes": config.n_transfer_nodes,
                "hop_delay": config.per_hop_delay}

    failures: list[SessionFailure] = []
    if config.mode is Mode.AMOUNT:
        results = run_protocol1(config.pairs, config.targets, config.global_period, readout=config.readout,
                                branch=config.branch, start_times=delivered_at, session_options=options,
                                failures=failures)
    else:
        results = run_protocol2(config.pairs, config.base_period, start_times=delivered_at,
                                session_options=options, failures=failures)

    for res in results:
        for node, ts in res.hop_log:
            sched.push(ts, res.pair_id, "quantum-hop", node=node)
        end = res.unitary_start + (res.applied_time * _period(config, directives, res.pair_id) / np.pi)
        sched.push(res.unitary_start, res.pair_id, "unitary-start", phase=res.applied_time)
        sched.push(end, res.pair_id, "unitary-end", phase=res.applied_time)
        sched.push(end, res.pair_id, "session-complete", schedule_metric=res.schedule_metric,
                   tangle=res.tangle, readout_at=res.wall_clock_completion)
    for fail in failures:
        for node, ts in fail.hop_log:
            sched.push(ts, fail.pair_id, "quantum-hop", node=node)
        at = fail.hop_log[-1][1] if fail.hop_log else delivered_at[fail.pair_id]
        sched.push(at, fail.pair_id, "session-failed", reason=str(fail))

    timeline = EventTimeline(list(sched.drain()))
    by_id = {d.pair_id: d for d in directives}
    grid = config.trace.times()
    traces = [
        entanglement_trace(config.pair(r.pair_id), by_id[r.pair_id], grid,
                           global_period=config.global_period, hold=config.trace.hold)
        for r in results
    ]
    return ScenarioRun(timeline, results, traces, failures, directives)


def _period(config, directives, pair_id):
    if config.mode is Mode.AMOUNT:
        return config.global_period
    return next(d.oscillation_period for d in directives if d.pair_id == pair_id)
