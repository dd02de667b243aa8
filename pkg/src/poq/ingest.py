"""Log ingestion and serialization: CSV, XES, and the internal JSON format."""

from __future__ import annotations

import csv
import gzip
import io
import logging
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from datetime import date

from .model import (
    ActivityInstance,
    EventLog,
    LogError,
    Millis,
    Trace,
    build_order,
)

log = logging.getLogger(__name__)


class IngestError(LogError):
    """Input data could not be turned into an event log."""


class MissingColumn(IngestError):
    pass


class UnparsableTimestamp(IngestError):
    pass


class StartAfterComplete(IngestError):
    pass


class MalformedXml(IngestError):
    pass


class MissingTimestamp(IngestError):
    pass


# ---------------------------------------------------------------------------
# Timestamps

_EPOCH_ORDINAL = date(1970, 1, 1).toordinal()

_ISO = re.compile(
    r"^(\d{4})-(\d{2})-(\d{2})"
    r"(?:[T ](\d{2}):(\d{2}):(\d{2})(?:\.(\d{1,9}))?)?"
    r"(Z|[+-]\d{2}:?\d{2})?$"
)


def parse_timestamp(text: str) -> Millis:
    """Parse an ISO-8601 timestamp to epoch milliseconds (UTC).

    Fractional seconds and timezone offsets are optional; timestamps without
    a timezone are read as UTC.  Fractions beyond milliseconds are truncated.
    """
    m = _ISO.match(text.strip())
    if not m:
        raise UnparsableTimestamp(f"not an ISO-8601 timestamp: {text!r}")
    year, month, day = int(m.group(1)), int(m.group(2)), int(m.group(3))
    try:
        days = date(year, month, day).toordinal() - _EPOCH_ORDINAL
    except ValueError as exc:
        raise UnparsableTimestamp(f"invalid date in {text!r}: {exc}") from exc
    hh = int(m.group(4) or 0)
    mm = int(m.group(5) or 0)
    ss = int(m.group(6) or 0)
    if hh > 23 or mm > 59 or ss > 60:
        raise UnparsableTimestamp(f"invalid time of day in {text!r}")
    frac = (m.group(7) or "").ljust(3, "0")[:3]
    millis = int(frac) if frac else 0
    tz = m.group(8)
    offset_min = 0
    if tz and tz != "Z":
        sign = -1 if tz[0] == "-" else 1
        digits = tz[1:].replace(":", "")
        offset_min = sign * (int(digits[:2]) * 60 + int(digits[2:]))
    seconds = days * 86400 + hh * 3600 + mm * 60 + ss - offset_min * 60
    return seconds * 1000 + millis


def format_timestamp(ms: Millis) -> str:
    """Canonical ISO-8601 UTC rendering; inverse of :func:`parse_timestamp`."""
    seconds, millis = divmod(ms, 1000)
    days, rest = divmod(seconds, 86400)
    hh, rest = divmod(rest, 3600)
    mm, ss = divmod(rest, 60)
    d = date.fromordinal(_EPOCH_ORDINAL + days)
    base = f"{d.isoformat()}T{hh:02d}:{mm:02d}:{ss:02d}"
    if millis:
        return f"{base}.{millis:03d}Z"
    return f"{base}Z"


# ---------------------------------------------------------------------------
# CSV

@dataclass(frozen=True)
class CsvColumns:
    """Column names of a CSV event log."""

    case: str = "case"
    activity: str = "activity"
    start: str = "start"
    complete: str = "complete"


def ingest_csv(
    data: bytes | str,
    columns: CsvColumns = CsvColumns(),
    log_id: str = "log",
) -> EventLog:
    """Read a CSV event log: one row per activity instance.

    The start column is optional (header may be absent, cells may be empty).
    Instance ids are the 1-based data row numbers, so fixtures keep stable,
    human-checkable ids.  Traces appear in order of first case occurrence.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    reader = csv.DictReader(io.StringIO(text))
    header = reader.fieldnames or []
    for required in (columns.case, columns.activity, columns.complete):
        if required not in header:
            raise MissingColumn(f"missing column {required!r} (header: {header})")
    has_start = columns.start in header

    by_case: dict[str, list[ActivityInstance]] = {}
    for row_no, row in enumerate(reader, start=1):
        case_id = (row.get(columns.case) or "").strip()
        label = (row.get(columns.activity) or "").strip()
        if not case_id or not label:
            raise IngestError(f"row {row_no}: empty case id or activity label")
        raw_complete = (row.get(columns.complete) or "").strip()
        if not raw_complete:
            raise UnparsableTimestamp(f"row {row_no}: empty complete timestamp")
        try:
            complete = parse_timestamp(raw_complete)
        except UnparsableTimestamp as exc:
            raise UnparsableTimestamp(f"row {row_no}: {exc}") from exc
        start: Millis | None = None
        raw_start = (row.get(columns.start) or "").strip() if has_start else ""
        if raw_start:
            try:
                start = parse_timestamp(raw_start)
            except UnparsableTimestamp as exc:
                raise UnparsableTimestamp(f"row {row_no}: {exc}") from exc
        if start is not None and start > complete:
            raise StartAfterComplete(
                f"row {row_no}: start {raw_start} is after complete {raw_complete}"
            )
        by_case.setdefault(case_id, []).append(
            ActivityInstance(
                id=str(row_no),
                case_id=case_id,
                label=label,
                start=start,
                complete=complete,
            )
        )
    return EventLog(
        log_id=log_id,
        traces=tuple(build_order(instances) for instances in by_case.values()),
    )


def to_csv(event_log: EventLog, columns: CsvColumns = CsvColumns()) -> str:
    """Serialize a log back to CSV; re-ingesting yields the same log."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([columns.case, columns.activity, columns.start, columns.complete])
    for trace in event_log.traces:
        for a in trace.instances:
            writer.writerow(
                [
                    a.case_id,
                    a.label,
                    format_timestamp(a.start) if a.start is not None else "",
                    format_timestamp(a.complete),
                ]
            )
    return out.getvalue()


# ---------------------------------------------------------------------------
# XES

def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _event_attrs(event: ET.Element) -> dict[str, str]:
    attrs: dict[str, str] = {}
    for child in event:
        key = child.get("key")
        value = child.get("value")
        if key is not None and value is not None:
            attrs[key] = value
    return attrs


def ingest_xes(data: bytes, log_id: str = "log") -> EventLog:
    """Read a (possibly gzipped) XES log.

    Events with lifecycle ``start`` are paired FIFO with the next
    ``complete`` of the same label in the same case; completes without a
    pending start become instances without one.  Starts left unpaired at the
    end of a trace are dropped and counted.
    """
    if data[:2] == b"\x1f\x8b":
        data = gzip.decompress(data)
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise MalformedXml(f"not well-formed XML: {exc}") from exc
    if _local(root.tag) != "log":
        raise MalformedXml(f"expected a <log> document, got <{_local(root.tag)}>")

    traces: list[Trace] = []
    dropped = 0
    counter = 0
    for t_index, trace_el in enumerate(el for el in root if _local(el.tag) == "trace"):
        attrs = _event_attrs(trace_el)
        case_id = attrs.get("concept:name", f"trace-{t_index + 1}")
        pending: dict[str, list[Millis]] = {}
        instances: list[ActivityInstance] = []
        for e_index, event in enumerate(
            el for el in trace_el if _local(el.tag) == "event"
        ):
            ev = _event_attrs(event)
            label = ev.get("concept:name")
            if label is None:
                raise MalformedXml(
                    f"trace {case_id!r} event {e_index + 1} has no concept:name"
                )
            raw_ts = ev.get("time:timestamp")
            if raw_ts is None:
                raise MissingTimestamp(
                    f"trace {case_id!r} event {e_index + 1} ({label}) has no time:timestamp"
                )
            ts = parse_timestamp(raw_ts)
            transition = ev.get("lifecycle:transition", "complete").lower()
            if transition == "start":
                pending.setdefault(label, []).append(ts)
            elif transition == "complete":
                queue = pending.get(label)
                start = queue.pop(0) if queue else None
                counter += 1
                instances.append(
                    ActivityInstance(
                        id=str(counter),
                        case_id=case_id,
                        label=label,
                        start=start,
                        complete=ts,
                    )
                )
            # other lifecycle transitions carry no interval information
        leftover = sum(len(q) for q in pending.values())
        dropped += leftover
        if instances:
            traces.append(build_order(instances))
    if dropped:
        log.warning("dropped %d start events without a matching complete", dropped)
    return EventLog(log_id=log_id, traces=tuple(traces), dropped_starts=dropped)


# ---------------------------------------------------------------------------
# Internal JSON format

def log_to_dict(event_log: EventLog) -> dict:
    return {
        "log_id": event_log.log_id,
        "traces": [
            {
                "case_id": t.case_id,
                "instances": [
                    {
                        "id": a.id,
                        "label": a.label,
                        "start": a.start,
                        "complete": a.complete,
                    }
                    for a in t.instances
                ],
                "reduction": sorted(t.reduction),
            }
            for t in event_log.traces
        ],
    }


def log_from_dict(payload: dict) -> EventLog:
    """Rebuild a log from its JSON form; the order is recomputed from timestamps."""
    traces = []
    for t in payload["traces"]:
        instances = [
            ActivityInstance(
                id=str(a["id"]),
                case_id=t["case_id"],
                label=a["label"],
                start=a["start"],
                complete=a["complete"],
            )
            for a in t["instances"]
        ]
        traces.append(build_order(instances))
    return EventLog(log_id=str(payload.get("log_id", "log")), traces=tuple(traces))
