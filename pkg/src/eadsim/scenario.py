"""Scenario files: YAML documents with ``schema: 1``.

Every validation failure raises :class:`ScenarioError` naming the source,
line and dotted field path of the first offending entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
import yaml

from .errors import ConfigurationError, InvalidParameter
from .parity import ChannelMode, ChannelModel, CodeParams
from .protocols import Mode, UserPair

SCHEMA_VERSION = 1
FORMATS = ("csv", "json-lines")


class ScenarioError(ConfigurationError):
    def __init__(self, message, source="<config>", line=None, field_path=""):
        where = f"{source}:{line}" if line else source
        prefix = f"{where}: {field_path}: " if field_path else f"{where}: "
        super().__init__(prefix + message)
        self.line = line
        self.field_path = field_path


@dataclass(frozen=True)
class TraceGrid:
    start: float = 0.0
    stop: float = 1.0
    points: int = 101
    hold: bool = False

    def times(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class OutputSpec:
    directory: str = "out"
    format: str = "csv"


@dataclass(frozen=True)
class ScenarioConfig:
    mode: Mode
    pairs: tuple[UserPair, ...]
    targets: tuple[float, ...] | None = None
    global_period: float | None = None
    base_period: float | None = None
    readout: str = "own"
    branch: str = "short"
    n_transfer_nodes: int = 1
    per_hop_delay: float = 0.0
    classical_latency: float = 0.0
    code: CodeParams = field(default_factory=CodeParams)
    channel: ChannelModel = field(default_factory=ChannelModel)
    trace: TraceGrid = field(default_factory=TraceGrid)
    output: OutputSpec = field(default_factory=OutputSpec)

    def pair(self, pair_id: str) -> UserPair:
        for p in self.pairs:
            if p.pair_id == pair_id:
                return p
        raise ConfigurationError(f"no pair with id {pair_id!r}; have {[p.pair_id for p in self.pairs]}")

    def with_seed(self, seed: int) -> ScenarioConfig:
        ch = ChannelModel(self.channel.mode, self.channel.erasure_probability, int(seed))
        return replace(self, channel=ch)

    def with_output(self, directory=None, fmt=None) -> ScenarioConfig:
        out = OutputSpec(directory or self.output.directory, fmt or self.output.format)
        return replace(self, output=out)


class _Reader:
    """Walks the composed YAML node tree so every value keeps its line number."""

    def __init__(self, source):
        self.source = source

    def fail(self, message, node=None, path=""):
        line = node.start_mark.line + 1 if node is not None else None
        raise ScenarioError(message, self.source, line, path)

    def mapping(self, node, path, allowed):
        if not isinstance(node, yaml.MappingNode):
            self.fail("expected a mapping", node, path)
        out = {}
        for key_node, value_node in node.value:
            key = key_node.value
            sub = f"{path}.{key}" if path else key
            if key not in allowed:
                self.fail(f"unknown field (allowed: {', '.join(sorted(allowed))})", key_node, sub)
            if key in out:
                self.fail("duplicate field", key_node, sub)
            out[key] = value_node
        return out

    def scalar(self, node, path):
        if not isinstance(node, yaml.ScalarNode):
            self.fail("expected a scalar value", node, path)
        return yaml.SafeLoader(" ").construct_object(node)

    def number(self, node, path, minimum=None, positive=False):
        value = self.scalar(node, path)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(f"expected a number, got {value!r}", node, path)
        value = float(value)
        if not math.isfinite(value):
            self.fail("must be finite", node, path)
        if positive and not value > 0:
            self.fail(f"must be > 0, got {value!r}", node, path)
        if minimum is not None and value < minimum:
            self.fail(f"must be >= {minimum}, got {value!r}", node, path)
        return value

    def integer(self, node, path, minimum=None, maximum=None):
        value = self.scalar(node, path)
        if isinstance(value, bool) or not isinstance(value, int):
            self.fail(f"expected an integer, got {value!r}", node, path)
        if (minimum is not None and value < minimum) or (maximum is not None and value > maximum):
            self.fail(f"must lie in [{minimum}, {maximum if maximum is not None else 'inf'}], got {value}", node, path)
        return value

    def string(self, node, path, choices=None):
        value = self.scalar(node, path)
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            value = str(value)
        if not isinstance(value, str) or not value:
            self.fail(f"expected a non-empty string, got {value!r}", node, path)
        if choices and value not in choices:
            self.fail(f"must be one of {', '.join(choices)}; got {value!r}", node, path)
        return value

    def boolean(self, node, path):
        value = self.scalar(node, path)
        if not isinstance(value, bool):
            self.fail(f"expected true or false, got {value!r}", node, path)
        return value


TOP_FIELDS = {"schema", "mode", "pairs", "global_period", "base_period", "readout", "branch",
              "network", "code", "channel", "trace", "output"}
AMOUNT_ONLY = ("global_period", "readout", "branch")
PAIR_FIELDS = {"id", "transmit", "receive", "priority", "target"}


def parse_scenario(text: str, source: str = "<config>") -> ScenarioConfig:
    """Parse and validate a scenario document."""
    r = _Reader(source)
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise ScenarioError(f"syntax error: {getattr(exc, 'problem', exc)}", source, line) from None
    if root is None:
        raise ScenarioError("empty document", source)
    top = r.mapping(root, "", TOP_FIELDS)

    if "schema" not in top:
        r.fail("missing required field 'schema'", root)
    if r.integer(top["schema"], "schema") != SCHEMA_VERSION:
        r.fail(f"unsupported schema version (expected {SCHEMA_VERSION})", top["schema"], "schema")
    if "mode" not in top:
        r.fail("missing required field 'mode'", root)
    mode = Mode(r.string(top["mode"], "mode", [m.value for m in Mode]))
    if "pairs" not in top:
        r.fail("missing required field 'pairs'", root)

    pairs_node = top["pairs"]
    if not isinstance(pairs_node, yaml.SequenceNode) or not pairs_node.value:
        r.fail("expected a non-empty list of pairs", pairs_node, "pairs")
    pairs, targets, seen = [], [], set()
    for i, node in enumerate(pairs_node.value):
        path = f"pairs[{i}]"
        f = r.mapping(node, path, PAIR_FIELDS)
        for required in ("id", "priority"):
            if required not in f:
                r.fail(f"missing required field '{required}'", node, path)
        pid = r.string(f["id"], f"{path}.id")
        if pid in seen:
            r.fail(f"duplicate pair id {pid!r}", f["id"], f"{path}.id")
        seen.add(pid)
        transmit = r.string(f["transmit"], f"{path}.transmit") if "transmit" in f else f"U_{pid}"
        receive = r.string(f["receive"], f"{path}.receive") if "receive" in f else f"B_{pid}"
        priority = r.integer(f["priority"], f"{path}.priority", minimum=1)
        if mode is Mode.AMOUNT:
            if "target" not in f:
                r.fail("amount mode needs an entanglement target per pair", node, path)
            tg = r.number(f["target"], f"{path}.target")
            if not 0.0 <= tg <= 1.0:
                r.fail(f"target must lie in [0, 1], got {tg!r}", f["target"], f"{path}.target")
            targets.append(tg)
        elif "target" in f:
            r.fail("targets are only valid in amount mode", f["target"], f"{path}.target")
        pairs.append(UserPair(pid, transmit, receive, priority))

    kw = {}
    if mode is Mode.AMOUNT:
        if "global_period" not in top:
            r.fail("amount mode needs 'global_period'", root)
        kw["global_period"] = r.number(top["global_period"], "global_period", positive=True)
        if "base_period" in top:
            r.fail("only valid in time-domain mode", top["base_period"], "base_period")
        if "readout" in top:
            kw["readout"] = r.string(top["readout"], "readout", ["own", "global"])
        if "branch" in top:
            kw["branch"] = r.string(top["branch"], "branch", ["short", "long"])
        kw["targets"] = tuple(targets)
    else:
        if "base_period" not in top:
            r.fail("time-domain mode needs 'base_period'", root)
        kw["base_period"] = r.number(top["base_period"], "base_period", positive=True)
        for name in AMOUNT_ONLY:
            if name in top:
                r.fail("only valid in amount mode", top[name], name)

    if "network" in top:
        f = r.mapping(top["network"], "network", {"transfer_nodes", "hop_delay", "classical_latency"})
        if "transfer_nodes" in f:
            kw["n_transfer_nodes"] = r.integer(f["transfer_nodes"], "network.transfer_nodes", minimum=0)
        if "hop_delay" in f:
            kw["per_hop_delay"] = r.number(f["hop_delay"], "network.hop_delay", minimum=0.0)
        if "classical_latency" in f:
            kw["classical_latency"] = r.number(f["classical_latency"], "network.classical_latency", minimum=0.0)

    if "code" in top:
        f = r.mapping(top["code"], "code", {"m", "n"})
        m = r.integer(f["m"], "code.m", 1, 3) if "m" in f else 1
        n = r.integer(f["n"], "code.n", 1, 3) if "n" in f else 1
        kw["code"] = CodeParams(m, n)

    if "channel" in top:
        f = r.mapping(top["channel"], "channel", {"mode", "erasure_probability", "seed"})
        cmode = r.string(f["mode"], "channel.mode", [c.value for c in ChannelMode]) if "mode" in f else "noiseless"
        prob = 0.0
        if "erasure_probability" in f:
            prob = r.number(f["erasure_probability"], "channel.erasure_probability")
            if not 0.0 <= prob <= 1.0:
                r.fail(f"must lie in [0, 1], got {prob!r}", f["erasure_probability"], "channel.erasure_probability")
        seed = r.integer(f["seed"], "channel.seed", minimum=0) if "seed" in f else 0
        kw["channel"] = ChannelModel(cmode, prob, seed)

    if "trace" in top:
        f = r.mapping(top["trace"], "trace", {"start", "stop", "points", "hold"})
        start = r.number(f["start"], "trace.start", minimum=0.0) if "start" in f else 0.0
        stop = r.number(f["stop"], "trace.stop", minimum=0.0) if "stop" in f else 1.0
        if stop < start:
            r.fail("must be >= trace.start", f.get("stop", top["trace"]), "trace.stop")
        points = r.integer(f["points"], "trace.points", minimum=1) if "points" in f else 101
        hold = r.boolean(f["hold"], "trace.hold") if "hold" in f else False
        kw["trace"] = TraceGrid(start, stop, points, hold)

    if "output" in top:
        f = r.mapping(top["output"], "output", {"dir", "format"})
        directory = r.string(f["dir"], "output.dir") if "dir" in f else "out"
        fmt = r.string(f["format"], "output.format", list(FORMATS)) if "format" in f else "csv"
        kw["output"] = OutputSpec(directory, fmt)

    try:
        return ScenarioConfig(mode=mode, pairs=tuple(pairs), **kw)
    except InvalidParameter as exc:
        raise ScenarioError(str(exc), source) from None


def load_scenario(path) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read(), source=str(path))


def scenario_to_dict(cfg: ScenarioConfig) -> dict:
    doc = {"schema": SCHEMA_VERSION, "mode": cfg.mode.value}
    if cfg.mode is Mode.AMOUNT:
        doc.update(global_period=cfg.global_period, readout=cfg.readout, branch=cfg.branch)
    else:
        doc["base_period"] = cfg.base_period
    pairs = []
    for i, p in enumerate(cfg.pairs):
        entry = {"id": p.pair_id, "transmit": p.transmit_user, "receive": p.receive_user, "priority": p.priority}
        if cfg.mode is Mode.AMOUNT:
            entry["target"] = cfg.targets[i]
        pairs.append(entry)
    doc["pairs"] = pairs
    doc["network"] = {"transfer_nodes": cfg.n_transfer_nodes, "hop_delay": cfg.per_hop_delay,
                      "classical_latency": cfg.classical_latency}
    doc["code"] = {"m": cfg.code.m, "n": cfg.code.n}
    doc["channel"] = {"mode": cfg.channel.mode.value, "erasure_probability": cfg.channel.erasure_probability,
                      "seed": cfg.channel.rng_seed}
    doc["trace"] = {"start": cfg.trace.start, "stop": cfg.trace.stop, "points": cfg.trace.points,
                    "hold": cfg.trace.hold}
    doc["output"] = {"dir": cfg.output.directory, "format": cfg.output.format}
    return doc


def emit_scenario(cfg: ScenarioConfig) -> str:
    return yaml.safe_dump(scenario_to_dict(cfg), sort_keys=False, default_flow_style=False)
