"""Event-data model: activity instances, partially ordered traces, event logs.

The ordering of a trace is derived purely from timestamps: an instance
precedes another iff it completed strictly before the other started (or,
when the other carries no start timestamp, strictly before it completed).
Equal timestamps never order instances, so simultaneous work shows up as
incomparability.  The derived relation is transitively closed by
construction; "directly follows" is defined over its transitive reduction.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

Millis = int
"""Timestamps are integer milliseconds since the Unix epoch (UTC)."""

Edge = tuple[str, str]


class LogError(ValueError):
    """Event data violates a structural constraint."""


class MixedCaseIds(LogError):
    """Instances of more than one case were handed to a single trace."""


class EmptyTrace(LogError):
    """A trace must contain at least one activity instance."""


class DuplicateInstanceIds(LogError):
    """Instance identifiers must be unique."""


class CyclicOrder(LogError):
    """The supplied relation contains a cycle and is no strict partial order."""


@dataclass(frozen=True)
class ActivityInstance:
    """One executed activity: identity, case, label, optional start, completion."""

    id: str
    case_id: str
    label: str
    start: Millis | None
    complete: Millis

    def __post_init__(self) -> None:
        if not self.label:
            raise LogError(f"instance {self.id!r} has an empty label")
        if self.start is not None and self.start > self.complete:
            raise LogError(
                f"instance {self.id!r} starts after it completes "
                f"({self.start} > {self.complete})"
            )

    @property
    def threshold(self) -> Millis:
        """Start when known, completion otherwise.

        An instance ``a`` precedes ``b`` exactly when
        ``a.complete < b.threshold``.
        """
        return self.complete if self.start is None else self.start


def precedes(a: ActivityInstance, b: ActivityInstance) -> bool:
    """True iff ``a`` strictly precedes ``b`` under the timestamp rule."""
    return a.complete < b.threshold


def _instance_sort_key(a: ActivityInstance) -> tuple:
    # Instances without a start sort before instances with one at the same
    # completion time; the id breaks remaining ties deterministically.
    if a.start is None:
        return (a.complete, 0, 0, a.id)
    return (a.complete, 1, a.start, a.id)


@dataclass(frozen=True)
class Trace:
    """A case's activity instances plus their strict partial order.

    ``order`` is the full, transitively closed relation over instance ids;
    ``reduction`` is its unique transitive reduction.  Instances are kept
    sorted by (complete, start, id) so every derived artifact is
    deterministic.  Traces are immutable; all derived lookups are cached.
    """

    case_id: str
    instances: tuple[ActivityInstance, ...]
    order: frozenset[Edge]
    reduction: frozenset[Edge]

    def __len__(self) -> int:
        return len(self.instances)

    @cached_property
    def by_id(self) -> Mapping[str, ActivityInstance]:
        return {a.id: a for a in self.instances}

    @cached_property
    def by_label(self) -> Mapping[str, tuple[ActivityInstance, ...]]:
        grouped: dict[str, list[ActivityInstance]] = {}
        for a in self.instances:
            grouped.setdefault(a.label, []).append(a)
        return {label: tuple(items) for label, items in grouped.items()}

    @cached_property
    def successors(self) -> Mapping[str, frozenset[str]]:
        """Closure successors per instance id."""
        succ: dict[str, set[str]] = {a.id: set() for a in self.instances}
        for u, v in self.order:
            succ[u].add(v)
        return {k: frozenset(v) for k, v in succ.items()}

    @cached_property
    def predecessors(self) -> Mapping[str, frozenset[str]]:
        pred: dict[str, set[str]] = {a.id: set() for a in self.instances}
        for u, v in self.order:
            pred[v].add(u)
        return {k: frozenset(v) for k, v in pred.items()}

    @cached_property
    def reduction_successors(self) -> Mapping[str, frozenset[str]]:
        succ: dict[str, set[str]] = {a.id: set() for a in self.instances}
        for u, v in self.reduction:
            succ[u].add(v)
        return {k: frozenset(v) for k, v in succ.items()}

    @cached_property
    def reduction_successor_labels(self) -> Mapping[str, frozenset[str]]:
        return {
            aid: frozenset(self.by_id[s].label for s in succs)
            for aid, succs in self.reduction_successors.items()
        }

    @cached_property
    def successor_labels(self) -> Mapping[str, frozenset[str]]:
        return {
            aid: frozenset(self.by_id[s].label for s in succs)
            for aid, succs in self.successors.items()
        }

    @cached_property
    def parallel_labels(self) -> Mapping[str, frozenset[str]]:
        """Labels of instances incomparable with each instance.

        Incomparability is taken literally: every instance is incomparable
        with itself, so its own label is always included.
        """
        out: dict[str, frozenset[str]] = {}
        for a in self.instances:
            succ = self.successors[a.id]
            pred = self.predecessors[a.id]
            out[a.id] = frozenset(
                b.label
                for b in self.instances
                if b.id not in succ and b.id not in pred
            )
        return out

    @cached_property
    def minimal(self) -> tuple[ActivityInstance, ...]:
        return tuple(a for a in self.instances if not self.predecessors[a.id])

    @cached_property
    def maximal(self) -> tuple[ActivityInstance, ...]:
        return tuple(a for a in self.instances if not self.successors[a.id])


def build_order(instances: Iterable[ActivityInstance]) -> Trace:
    """Construct a trace from one case's instances.

    Compares every pair of instances under the timestamp rule; the result is
    provably a strict partial order and already transitively closed.
    """
    items = list(instances)
    if not items:
        raise EmptyTrace("a trace needs at least one activity instance")
    case_ids = {a.case_id for a in items}
    if len(case_ids) > 1:
        raise MixedCaseIds(f"instances belong to several cases: {sorted(case_ids)}")
    ids = [a.id for a in items]
    if len(set(ids)) != len(ids):
        dupes = sorted(i for i, n in Counter(ids).items() if n > 1)
        raise DuplicateInstanceIds(f"duplicate instance ids: {dupes}")
    items.sort(key=_instance_sort_key)
    order = frozenset(
        (a.id, b.id) for a in items for b in items if a.id != b.id and precedes(a, b)
    )
    return Trace(
        case_id=items[0].case_id,
        instances=tuple(items),
        order=order,
        reduction=_reduce_closed(order),
    )


def _closure(pairs: frozenset[Edge] | set[Edge]) -> dict[str, set[str]]:
    succ: dict[str, set[str]] = {}
    for u, v in pairs:
        succ.setdefault(u, set()).add(v)
        succ.setdefault(v, set())
    changed = True
    while changed:
        changed = False
        for u in succ:
            reach = set(succ[u])
            for v in list(reach):
                extra = succ[v] - reach
                if extra:
                    reach |= extra
                    changed = True
            succ[u] = reach
    return succ


def _reduce_closed(order: frozenset[Edge]) -> frozenset[Edge]:
    # For a transitively closed relation the unique reduction keeps exactly
    # the edges with no two-step detour.
    succ: dict[str, set[str]] = {}
    for u, v in order:
        succ.setdefault(u, set()).add(v)
    return frozenset(
        (u, v)
        for u, v in order
        if not any(v in succ.get(w, ()) for w in succ[u] if w != v)
    )


def transitive_reduction(order: Iterable[Edge]) -> frozenset[Edge]:
    """Minimal relation whose transitive closure equals the closure of ``order``.

    Unique for strict partial orders.  Raises :class:`CyclicOrder` when the
    input relates any element to itself, directly or transitively.
    """
    pairs = set(order)
    succ = _closure(pairs)
    for u, reach in succ.items():
        if u in reach:
            raise CyclicOrder(f"element {u!r} precedes itself")
    closed = frozenset((u, v) for u, reach in succ.items() for v in reach)
    return _reduce_closed(closed)


def minimal_elements(trace: Trace) -> tuple[ActivityInstance, ...]:
    """Instances with no predecessor."""
    return trace.minimal


def maximal_elements(trace: Trace) -> tuple[ActivityInstance, ...]:
    """Instances with no successor."""
    return trace.maximal


@dataclass(frozen=True)
class EventLog:
    """A collection of traces of the same process."""

    log_id: str
    traces: tuple[Trace, ...]
    dropped_starts: int = 0

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for trace in self.traces:
            for a in trace.instances:
                if a.id in seen:
                    raise DuplicateInstanceIds(
                        f"instance id {a.id!r} occurs in more than one trace"
                    )
                seen.add(a.id)

    def __len__(self) -> int:
        return len(self.traces)

    @cached_property
    def label_alphabet(self) -> Counter[str]:
        counts: Counter[str] = Counter()
        for trace in self.traces:
            counts.update(a.label for a in trace.instances)
        return counts

    @cached_property
    def by_case(self) -> Mapping[str, Trace]:
        return {t.case_id: t for t in self.traces}
