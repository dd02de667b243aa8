"""Variant grouping: canonical keys for traces up to order isomorphism.

Two traces belong to the same variant iff there is a label-preserving
bijection between their instances that maps one transitive reduction onto
the other.  The key is a digest of a canonical serialization of the labeled
reduction DAG, computed by partition refinement with an exhaustive
individualization search inside unresolved cells, so key equality is exact
isomorphism, not a heuristic.
"""

from __future__ import annotations

import hashlib
import json
import weakref
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from .model import Edge, EventLog, Trace

_Colors = dict[str, int]


@dataclass(frozen=True)
class VariantGroup:
    """Traces sharing identical ordering relationships among their activities."""

    canonical_key: bytes
    trace_ids: tuple[str, ...]
    representative: Trace

    @property
    def key_hex(self) -> str:
        return self.canonical_key.hex()


def _rank(values: Mapping[str, object]) -> _Colors:
    order = {c: i for i, c in enumerate(sorted(set(values.values()), key=repr))}
    return {v: order[values[v]] for v in values}


def _refine(
    nodes: Sequence[str],
    succs: Mapping[str, frozenset[str]],
    preds: Mapping[str, frozenset[str]],
    colors: _Colors,
) -> _Colors:
    # Iterate neighbourhood signatures until the partition stabilizes.  All
    # signature components are isomorphism invariants, so the resulting
    # integer colors are comparable across isomorphic graphs.
    while True:
        sig = {
            v: (
                colors[v],
                tuple(sorted(colors[u] for u in succs[v])),
                tuple(sorted(colors[u] for u in preds[v])),
            )
            for v in nodes
        }
        new = _rank(sig)
        if _partition(nodes, new) == _partition(nodes, colors):
            return new
        colors = new


def _partition(nodes: Sequence[str], colors: _Colors) -> frozenset[frozenset[str]]:
    cells: dict[int, set[str]] = {}
    for v in nodes:
        cells.setdefault(colors[v], set()).add(v)
    return frozenset(frozenset(c) for c in cells.values())


def canonical_form(labels: Mapping[str, str], edges: Sequence[Edge]) -> str:
    """Canonical serialization of a node-labeled DAG.

    Equal strings iff the graphs are isomorphic under a label-preserving
    bijection.  Nodes that are exact twins (same label, same neighbour sets)
    are interchangeable, so only one of them is ever individualized.
    """
    nodes = sorted(labels)
    succs: dict[str, set[str]] = {v: set() for v in nodes}
    preds: dict[str, set[str]] = {v: set() for v in nodes}
    for u, v in edges:
        succs[u].add(v)
        preds[v].add(u)
    fsuccs = {v: frozenset(succs[v]) for v in nodes}
    fpreds = {v: frozenset(preds[v]) for v in nodes}

    initial = _rank(
        {v: (labels[v], len(fpreds[v]), len(fsuccs[v])) for v in nodes}
    )
    best: str | None = None

    def serialize(ordering: Sequence[str]) -> str:
        pos = {v: i for i, v in enumerate(ordering)}
        return json.dumps(
            [
                [labels[v] for v in ordering],
                sorted((pos[u], pos[v]) for u in nodes for v in fsuccs[u]),
            ],
            separators=(",", ":"),
        )

    def search(colors: _Colors) -> None:
        nonlocal best
        cells: dict[int, list[str]] = {}
        for v in nodes:
            cells.setdefault(colors[v], []).append(v)
        ordered_cells = [sorted(cells[c]) for c in sorted(cells)]
        target = next((c for c in ordered_cells if len(c) > 1), None)
        if target is None:
            s = serialize([c[0] for c in ordered_cells])
            if best is None or s < best:
                best = s
            return
        seen: set[tuple] = set()
        for v in target:
            twin_sig = (labels[v], fsuccs[v], fpreds[v])
            if twin_sig in seen:
                continue
            seen.add(twin_sig)
            branched = dict(colors)
            branched[v] = -1
            search(_refine(nodes, fsuccs, fpreds, _rank(branched)))

    search(_refine(nodes, fsuccs, fpreds, initial))
    assert best is not None
    return best


@lru_cache(maxsize=None)
def variant_key(trace: Trace) -> bytes:
    """Deterministic key; equal keys iff labeled reductions are isomorphic."""
    form = canonical_form(
        {a.id: a.label for a in trace.instances}, sorted(trace.reduction)
    )
    return hashlib.sha256(form.encode("utf-8")).digest()


# Keyed by object identity: logs are immutable, and hashing a large log on
# every lookup would cost more than the grouping it saves.
_variant_cache: dict[int, tuple["VariantGroup", ...]] = {}


def group_variants(log: EventLog) -> tuple[VariantGroup, ...]:
    """Group a log's traces into variants.

    Sorted by trace count descending, then key, so listings are stable.
    Grouping is memoized per log object; logs are immutable.
    """
    cached = _variant_cache.get(id(log))
    if cached is not None:
        return cached
    groups: dict[bytes, list[Trace]] = {}
    for trace in log.traces:
        groups.setdefault(variant_key(trace), []).append(trace)
    variants = [
        VariantGroup(
            canonical_key=key,
            trace_ids=tuple(t.case_id for t in members),
            representative=members[0],
        )
        for key, members in groups.items()
    ]
    variants.sort(key=lambda g: (-len(g.trace_ids), g.canonical_key))
    result = tuple(variants)
    key = id(log)
    _variant_cache[key] = result
    weakref.finalize(log, _variant_cache.pop, key, None)
    return result
