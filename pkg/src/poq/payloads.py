"""JSON payloads shared verbatim by the CLI and the HTTP service.

Both front ends serialize through :func:`dumps`, so the bytes a script gets
from ``--json`` match the service response body for the same log and query.
"""

from __future__ import annotations

import json

from . import canonical
from .ast import format_query, leaf_count
from .evaluator import LogResult, Mode, eval_log, median_leaves
from .model import EventLog
from .parser import highlight, parse
from .canonical import VariantGroup


def dumps(payload: object) -> str:
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":"))


def _variant_dag(group: VariantGroup) -> dict:
    rep = group.representative
    return {
        "key": group.key_hex,
        "count": len(group.trace_ids),
        "nodes": [{"id": a.id, "label": a.label} for a in rep.instances],
        "edges": sorted([u, v] for u, v in rep.reduction),
    }


def session_log_payload(log: EventLog, name: str) -> dict:
    variants = canonical.group_variants(log)
    labels = sorted(
        log.label_alphabet.items(), key=lambda item: (-item[1], item[0])
    )
    return {
        "log_id": log.log_id,
        "name": name,
        "trace_count": len(log.traces),
        "variant_count": len(variants),
        "labels": [{"label": label, "count": count} for label, count in labels],
        "dropped_starts": log.dropped_starts,
    }


def parse_payload(text: str) -> dict:
    """Parse feedback for the editor: 200-level result either way."""
    from .parser import ParseError

    tokens = [
        {"start": s.start, "end": s.end, "class": s.cls} for s in highlight(text)
    ]
    try:
        query = parse(text)
    except ParseError as exc:
        return {"ok": False, "error": exc.to_json(), "tokens": tokens}
    return {
        "ok": True,
        "leaves": leaf_count(query),
        "formatted": format_query(query),
        "tokens": tokens,
    }


def query_payload(
    log: EventLog, text: str, mode: Mode, result: LogResult | None = None
) -> dict:
    """Result of evaluating ``text`` on ``log``; raises ParseError upstream."""
    query = parse(text)
    if result is None:
        result = eval_log(log, query, mode)
    variants = canonical.group_variants(log)
    matched = set(result.matched_trace_ids)
    matched_variants = [
        g for g in variants if any(tid in matched for tid in g.trace_ids)
    ]
    return {
        "log_id": log.log_id,
        "query": text,
        "mode": "short" if mode is Mode.SHORT_CIRCUIT else "full",
        "trace_count": len(log.traces),
        "variant_count": len(variants),
        "matched_trace_count": len(result.matched_trace_ids),
        "matched_variant_count": len(matched_variants),
        "matched_trace_ids": list(result.matched_trace_ids),
        "matched_variants": [_variant_dag(g) for g in matched_variants],
        "metrics": {
            "total_leaves": leaf_count(query),
            "median_leaves_evaluated": median_leaves(result),
            "wall_time_ms": round(result.wall_time_s * 1000.0, 3),
        },
    }


def variants_payload(log: EventLog) -> dict:
    variants = canonical.group_variants(log)
    return {
        "log_id": log.log_id,
        "trace_count": len(log.traces),
        "variant_count": len(variants),
        "variants": [_variant_dag(g) for g in variants],
    }
