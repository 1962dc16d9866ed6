"""Trace and session exports for external plotting."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from .errors import EadError
from .protocols import EntanglementTrace, TraceSample

TRACE_FIELDS = ("pair_id", "wall_clock_s", "schedule_metric", "tangle", "negativity", "ree")
SESSION_FIELDS = ("pair_id", "applied_phase", "unitary_start_s", "completion_s", "schedule_metric",
                  "tangle", "negativity", "ree")


class ExportError(EadError, OSError):
    pass


def fmt(value: float) -> str:
    """12 significant digits."""
    return format(value, ".12g")


def _rounded(value: float) -> float:
    return float(fmt(value)) if math.isfinite(value) else value


def _trace_rows(traces):
    for tr in traces:
        for s in tr.samples:
            yield (tr.pair_id, s.wall_clock, s.schedule_metric, s.tangle, s.negativity, s.ree)


def traces_to_text(traces, format: str = "csv") -> str:
    buf = io.StringIO(newline="")
    if format == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TRACE_FIELDS)
        for row in _trace_rows(traces):
            w.writerow([row[0], *(fmt(v) for v in row[1:])])
    elif format == "json-lines":
        for row in _trace_rows(traces):
            rec = dict(zip(TRACE_FIELDS, [row[0], *(_rounded(v) for v in row[1:])]))
            buf.write(json.dumps(rec) + "\n")
    else:
        raise ValueError(f"unknown export format {format!r}; use csv or json-lines")
    return buf.getvalue()


def _write(path, text):
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ExportError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def export_traces(traces, format: str, path) -> Path:
    return _write(path, traces_to_text(traces, format))


def read_traces(path, format: str = "csv") -> list[EntanglementTrace]:
    """Load traces written by :func:`export_traces`; pair order is preserved."""
    with open(path, encoding="utf-8", newline="") as fh:
        if format == "csv":
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or tuple(header) != TRACE_FIELDS:
                raise ExportError(f"{path}: unexpected header {header}")
            rows = [(r[0], *map(float, r[1:])) for r in reader]
        else:
            rows = []
            for line in fh:
                rec = json.loads(line)
                rows.append(tuple(rec[k] for k in TRACE_FIELDS))
    grouped: dict[str, list[TraceSample]] = {}
    for pid, *values in rows:
        grouped.setdefault(pid, []).append(TraceSample(*values))
    return [EntanglementTrace(pid, tuple(samples)) for pid, samples in grouped.items()]


def export_sessions(results, path) -> Path:
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SESSION_FIELDS)
    for r in results:
        w.writerow([r.pair_id, *(fmt(v) for v in (r.applied_time, r.unitary_start, r.wall_clock_completion,
                                                   r.schedule_metric, r.tangle, r.negativity, r.ree))])
    return _write(path, buf.getvalue())


def export_timeline(timeline, path) -> Path:
    lines = []
    for e in timeline.events:
        rec = {"t": _rounded(e.timestamp), "pair_id": e.pair_id, "kind": e.kind}
        rec.update({k: (_rounded(v) if isinstance(v, float) else v) for k, v in e.payload.items()})
        lines.append(json.dumps(rec, sort_keys=True))
    return _write(path, "".join(l + "\n" for l in lines))
