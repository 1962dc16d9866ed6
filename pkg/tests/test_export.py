import json

import numpy as np
import pytest

from eadsim.export import (
    TRACE_FIELDS,
    ExportError,
    export_sessions,
    export_timeline,
    export_traces,
    fmt,
    read_traces,
    traces_to_text,
)
from eadsim.linalg import DensityMatrix
from eadsim.protocols import UserPair, entanglement_trace, plan_time_differentiation, run_protocol2
from eadsim.simulate import Event, EventTimeline
from eadsim.statefile import format_state, parse_state
from eadsim.errors import ConfigurationError

PAIRS = [UserPair("a", "Ua", "Ba", 1), UserPair("b", "Ub", "Bb", 2)]


def traces():
    directives = plan_time_differentiation(PAIRS, 1.0)
    return [entanglement_trace(p, d, np.linspace(0, 1, 7)) for p, d in zip(PAIRS, directives)]


class TestTraces:
    def test_csv_header_and_rows(self):
        lines = traces_to_text(traces()).splitlines()
        assert lines[0] == ",".join(TRACE_FIELDS)
        assert len(lines) == 15

    def test_jsonl(self):
        records = [json.loads(l) for l in traces_to_text(traces(), "json-lines").splitlines()]
        assert len(records) == 14 and tuple(records[0]) == TRACE_FIELDS

    @pytest.mark.parametrize("format,ext", [("csv", "csv"), ("json-lines", "jsonl")])
    def test_round_trip(self, tmp_path, format, ext):
        original = traces()
        path = export_traces(original, format, tmp_path / f"t.{ext}")
        loaded = read_traces(path, format)
        assert [t.pair_id for t in loaded] == ["a", "b"]
        for a, b in zip(original, loaded):
            for s, t in zip(a.samples, b.samples):
                assert np.allclose([s.wall_clock, s.tangle, s.ree], [t.wall_clock, t.tangle, t.ree], atol=1e-11)

    def test_deterministic_bytes(self, tmp_path):
        a = export_traces(traces(), "csv", tmp_path / "a.csv").read_bytes()
        b = export_traces(traces(), "csv", tmp_path / "b.csv").read_bytes()
        assert a == b

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            traces_to_text(traces(), "xml")

    def test_unwritable(self, tmp_path):
        with pytest.raises(ExportError):
            export_traces(traces(), "csv", tmp_path / "missing" / "t.csv")

    def test_bad_header(self, tmp_path):
        (tmp_path / "t.csv").write_text("x,y\n")
        with pytest.raises(ExportError):
            read_traces(tmp_path / "t.csv")

    def test_fmt(self):
        assert fmt(0.1 + 0.2) == "0.3"
        assert fmt(1e-20) == "1e-20"


class TestOtherExports:
    def test_sessions(self, tmp_path):
        path = export_sessions(run_protocol2(PAIRS, 1.0), tmp_path / "s.csv")
        lines = path.read_text().splitlines()
        assert lines[0].startswith("pair_id,applied_phase")
        assert lines[1].split(",")[3] == "0.25"

    def test_timeline(self, tmp_path):
        tl = EventTimeline([Event(0.1, "a", "directive-issued", {"x": 1 / 3})])
        rec = json.loads(export_timeline(tl, tmp_path / "t.jsonl").read_text())
        assert rec == {"kind": "directive-issued", "pair_id": "a", "t": 0.1, "x": 0.333333333333}


class TestStateFile:
    def test_round_trip(self, rng):
        import oracles
        m = oracles.random_density(rng, 4)
        rho = parse_state(format_state(DensityMatrix(m, ("A", "B"))))
        assert rho.labels == ("A", "B") and rho.approx_equal(m)

    def test_comments_and_blank_lines(self):
        rho = parse_state("# mixed\n2\n\n0.5,0 0,0\n0,0 0.5,0\n")
        assert rho.dim == 2

    @pytest.mark.parametrize("text", ["", "x\n", "2\n1,0 0,0\n", "2\n1 0 0 0\n", "0\n"])
    def test_errors(self, text):
        with pytest.raises(ConfigurationError):
            parse_state(text)
