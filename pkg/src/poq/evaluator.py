"""Query evaluation over traces and logs, with leaf-count metrics.

Leaves yield Booleans per trace, Boolean nodes combine them bottom-up.
In short-circuit mode the depth-first, left-to-right traversal skips the
right operand of AND once the left is false and of OR once the left is
true; full mode always evaluates every leaf.  Both modes agree on the
result, only the number of evaluated leaves differs.

Binary leaves without a cardinality hold universally: every instance with
the left label must relate to a witness (vacuously true when the label is
absent).  With a cardinality, the number of left-label instances that
relate to a witness is compared against k.  Witnesses range over the whole
trace, so an instance can serve as its own parallel witness when the labels
coincide (incomparability is reflexive here).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum, auto
from statistics import median

from . import canonical
from .ast import (
    And,
    CardOp,
    Cardinality,
    LabelSet,
    Leaf,
    LeafQuery,
    Not,
    Op,
    Query,
    SetMode,
    leaf_count,
)
from .model import ActivityInstance, EventLog, Trace


class Mode(Enum):
    SHORT_CIRCUIT = auto()
    FULL = auto()


@dataclass(frozen=True)
class EvalOutcome:
    matched: bool
    leaves_evaluated: int
    total_leaves: int


@dataclass(frozen=True)
class LogResult:
    matched_trace_ids: tuple[str, ...]
    matched_variant_keys: tuple[str, ...]
    per_trace: tuple[EvalOutcome, ...]
    wall_time_s: float


def cardinality_holds(count: int, card: Cardinality) -> bool:
    """Compare a satisfying-set size against a cardinality constraint."""
    if card.op is CardOp.EQ:
        return count == card.k
    if card.op is CardOp.GEQ:
        return count >= card.k
    return count <= card.k


def satisfying_set_unary(
    trace: Trace, op: Op, label: str
) -> tuple[ActivityInstance, ...]:
    """Instances the unary operator selects for one label."""
    if op is Op.IS_C:
        return trace.by_label.get(label, ())
    if op is Op.IS_S:
        return tuple(a for a in trace.minimal if a.label == label)
    if op is Op.IS_E:
        return tuple(a for a in trace.maximal if a.label == label)
    raise ValueError(f"{op.value} is not a unary operator")


def _relation_labels(trace: Trace, op: Op, instance_id: str) -> frozenset[str]:
    if op is Op.IS_DF:
        return trace.reduction_successor_labels[instance_id]
    if op is Op.IS_EF:
        return trace.successor_labels[instance_id]
    if op is Op.IS_P:
        return trace.parallel_labels[instance_id]
    raise ValueError(f"{op.value} is not a binary operator")


def _witnessed(trace: Trace, op: Op, a: ActivityInstance, right: LabelSet) -> bool:
    related = _relation_labels(trace, op, a.id)
    if right.mode is SetMode.ALL:
        return all(label in related for label in right.labels)
    return any(label in related for label in right.labels)


def satisfying_set_binary(
    trace: Trace, op: Op, left_label: str, right: LabelSet
) -> tuple[ActivityInstance, ...]:
    """Left-label instances related to the right operand by the operator."""
    return tuple(
        a
        for a in trace.by_label.get(left_label, ())
        if _witnessed(trace, op, a, right)
    )


def eval_leaf(trace: Trace, leaf: Leaf) -> bool:
    """Evaluate a single control-flow constraint on a trace."""
    if not leaf.left.is_single:
        # Left-side sets distribute over singleton leaves; cardinalities
        # apply per label, not to the union of the satisfying sets.
        results = (
            eval_leaf(trace, Leaf(leaf.op, LabelSet.single(label), leaf.right, leaf.card))
            for label in leaf.left.labels
        )
        if leaf.left.mode is SetMode.ALL:
            return all(results)
        return any(results)
    label = leaf.left.label
    if leaf.op.is_unary:
        count = len(satisfying_set_unary(trace, leaf.op, label))
        card = leaf.card if leaf.card is not None else Cardinality(CardOp.GEQ, 1)
        return cardinality_holds(count, card)
    right = leaf.right
    assert right is not None
    if leaf.card is None:
        return all(
            _witnessed(trace, leaf.op, a, right)
            for a in trace.by_label.get(label, ())
        )
    count = len(satisfying_set_binary(trace, leaf.op, label, right))
    return cardinality_holds(count, leaf.card)


def _eval_tree(trace: Trace, query: Query, mode: Mode) -> tuple[bool, int]:
    evaluated = 0

    def go(node: Query) -> bool:
        nonlocal evaluated
        if isinstance(node, LeafQuery):
            evaluated += 1
            return eval_leaf(trace, node.leaf)
        if isinstance(node, Not):
            return not go(node.child)
        left = go(node.left)
        if isinstance(node, And):
            if mode is Mode.SHORT_CIRCUIT and not left:
                return False
            return go(node.right) and left
        if mode is Mode.SHORT_CIRCUIT and left:
            return True
        return go(node.right) or left

    return go(query), evaluated


def eval_query(
    trace: Trace, query: Query, mode: Mode = Mode.SHORT_CIRCUIT
) -> EvalOutcome:
    """Evaluate a query tree on one trace, counting evaluated leaves."""
    matched, evaluated = _eval_tree(trace, query, mode)
    return EvalOutcome(
        matched=matched, leaves_evaluated=evaluated, total_leaves=leaf_count(query)
    )


def eval_log(
    log: EventLog, query: Query, mode: Mode = Mode.SHORT_CIRCUIT
) -> LogResult:
    """Evaluate a query over every trace of a log.

    ``wall_time_s`` covers only the evaluation loop, not variant grouping.
    """
    total = leaf_count(query)
    started = time.perf_counter()
    raw = [_eval_tree(trace, query, mode) for trace in log.traces]
    elapsed = time.perf_counter() - started
    outcomes = tuple(
        EvalOutcome(matched=m, leaves_evaluated=n, total_leaves=total)
        for m, n in raw
    )
    matched_ids = tuple(
        t.case_id for t, outcome in zip(log.traces, outcomes) if outcome.matched
    )
    matched_set = set(matched_ids)
    keys = sorted(
        {
            g.key_hex
            for g in canonical.group_variants(log)
            if any(tid in matched_set for tid in g.trace_ids)
        }
    )
    return LogResult(
        matched_trace_ids=matched_ids,
        matched_variant_keys=tuple(keys),
        per_trace=outcomes,
        wall_time_s=elapsed,
    )


def median_leaves(result: LogResult) -> float:
    """Median number of leaves evaluated per trace."""
    return float(median(o.leaves_evaluated for o in result.per_trace))
