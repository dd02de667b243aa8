"""Benchmark harness: seeded query generation, timing, early-termination ablation.

Queries are generated at random from a weight-configurable profile, then
pre-selected so that none is satisfied by every trace or by none.  Each
surviving query is timed in both evaluation modes; the report carries the
medians plus a rank correlation between evaluated leaves and runtime.
"""

from __future__ import annotations

import csv
import io
import random
import time
from dataclasses import dataclass, field
from statistics import median

from .ast import (
    And,
    CardOp,
    Cardinality,
    LabelSet,
    Leaf,
    LeafQuery,
    Not,
    Op,
    Or,
    Query,
    SetMode,
    format_query,
    leaf_count,
)
from .evaluator import Mode, eval_log, eval_query
from .model import ActivityInstance, EventLog, build_order


class GenerationExhausted(RuntimeError):
    """The pre-selection filter rejected too many candidate queries."""


_DEFAULT_WEIGHTS = {
    Op.IS_C: 3.0,
    Op.IS_S: 1.0,
    Op.IS_E: 1.0,
    Op.IS_DF: 2.0,
    Op.IS_EF: 2.0,
    Op.IS_P: 1.0,
}


@dataclass(frozen=True)
class QueryGenConfig:
    max_depth: int = 3
    operator_weights: dict[Op, float] = field(
        default_factory=lambda: dict(_DEFAULT_WEIGHTS)
    )
    leaf_probability: float = 0.45
    not_probability: float = 0.15
    cardinality_probability: float = 0.4
    k_range: tuple[int, int] = (0, 3)
    set_probability: float = 0.2
    set_size_range: tuple[int, int] = (2, 3)
    seed: int = 0

    def profile(self) -> dict:
        return {
            "max_depth": self.max_depth,
            "operator_weights": {op.value: w for op, w in self.operator_weights.items()},
            "leaf_probability": self.leaf_probability,
            "not_probability": self.not_probability,
            "cardinality_probability": self.cardinality_probability,
            "k_range": list(self.k_range),
            "set_probability": self.set_probability,
            "set_size_range": list(self.set_size_range),
            "seed": self.seed,
        }


@dataclass(frozen=True)
class BenchRecord:
    query: str
    total_leaves: int
    median_leaves_evaluated: float
    matched_count: int
    t_short_ms: float
    t_full_ms: float


def _random_labels(rng: random.Random, alphabet: list[str], n: int) -> list[str]:
    n = min(n, len(alphabet))
    return rng.sample(alphabet, n)


def _random_operand(rng: random.Random, config: QueryGenConfig, alphabet: list[str]) -> LabelSet:
    if rng.random() < config.set_probability and len(alphabet) > 1:
        size = rng.randint(*config.set_size_range)
        mode = rng.choice((SetMode.ANY, SetMode.ALL))
        return LabelSet(mode, tuple(_random_labels(rng, alphabet, size)))
    return LabelSet.single(rng.choice(alphabet))


def _random_leaf(rng: random.Random, config: QueryGenConfig, alphabet: list[str]) -> Query:
    ops, weights = zip(*config.operator_weights.items())
    op: Op = rng.choices(ops, weights=weights, k=1)[0]
    card = None
    if rng.random() < config.cardinality_probability:
        card = Cardinality(rng.choice(tuple(CardOp)), rng.randint(*config.k_range))
    if op.is_unary:
        return LeafQuery(Leaf(op=op, left=_random_operand(rng, config, alphabet), card=card))
    left = _random_operand(rng, config, alphabet)
    right = _random_operand(rng, config, alphabet)
    if not left.is_single and not right.is_single:
        right = LabelSet.single(right.labels[0])
    return LeafQuery(Leaf(op=op, left=left, right=right, card=card))


def _random_query(
    rng: random.Random, config: QueryGenConfig, alphabet: list[str], depth: int
) -> Query:
    if depth >= config.max_depth or rng.random() < config.leaf_probability:
        return _random_leaf(rng, config, alphabet)
    roll = rng.random()
    if roll < config.not_probability:
        return Not(_random_query(rng, config, alphabet, depth + 1))
    left = _random_query(rng, config, alphabet, depth + 1)
    right = _random_query(rng, config, alphabet, depth + 1)
    return And(left, right) if roll < (1 + config.not_probability) / 2 else Or(left, right)


def generate_queries(log: EventLog, config: QueryGenConfig, n: int) -> list[Query]:
    """Generate ``n`` queries that each match some but not all traces.

    Deterministic for a fixed seed.  Oversamples and filters; gives up after
    1000*n candidates.
    """
    if n == 0:
        return []
    if not log.traces:
        raise GenerationExhausted("cannot generate queries for an empty log")
    alphabet = sorted(log.label_alphabet)
    rng = random.Random(config.seed)
    accepted: list[Query] = []
    budget = 1000 * n
    for _ in range(budget):
        candidate = _random_query(rng, config, alphabet, depth=0)
        matched = sum(
            1 for trace in log.traces if eval_query(trace, candidate).matched
        )
        if 0 < matched < len(log.traces):
            accepted.append(candidate)
            if len(accepted) == n:
                return accepted
    raise GenerationExhausted(
        f"only {len(accepted)} of {n} queries survived pre-selection "
        f"after {budget} candidates"
    )


def run_bench(
    log: EventLog, queries: list[Query], repetitions: int = 5
) -> list[BenchRecord]:
    """Time every query in both modes; medians over ``repetitions`` runs."""
    records: list[BenchRecord] = []
    for query in queries:
        eval_log(log, query, Mode.SHORT_CIRCUIT)  # warm-up, not timed
        times: dict[Mode, list[float]] = {Mode.SHORT_CIRCUIT: [], Mode.FULL: []}
        result_short = None
        for _ in range(repetitions):
            for mode in (Mode.SHORT_CIRCUIT, Mode.FULL):
                result = eval_log(log, query, mode)
                # The engine times its own evaluation loop, excluding
                # variant bookkeeping that is identical in both modes.
                times[mode].append(result.wall_time_s)
                if mode is Mode.SHORT_CIRCUIT:
                    result_short = result
        assert result_short is not None
        records.append(
            BenchRecord(
                query=format_query(query),
                total_leaves=leaf_count(query),
                median_leaves_evaluated=float(
                    median(o.leaves_evaluated for o in result_short.per_trace)
                ),
                matched_count=len(result_short.matched_trace_ids),
                t_short_ms=median(times[Mode.SHORT_CIRCUIT]) * 1000.0,
                t_full_ms=median(times[Mode.FULL]) * 1000.0,
            )
        )
    return records


def spearman(xs: list[float], ys: list[float]) -> float | None:
    """Spearman rank correlation with average ranks for ties; None if undefined."""
    if len(xs) != len(ys) or len(xs) < 2:
        return None

    def ranks(values: list[float]) -> list[float]:
        order = sorted(range(len(values)), key=lambda i: values[i])
        out = [0.0] * len(values)
        i = 0
        while i < len(order):
            j = i
            while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
                j += 1
            avg = (i + j) / 2 + 1
            for idx in order[i : j + 1]:
                out[idx] = avg
            i = j + 1
        return out

    rx, ry = ranks(xs), ranks(ys)
    mx = sum(rx) / len(rx)
    my = sum(ry) / len(ry)
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = sum((a - mx) ** 2 for a in rx)
    vy = sum((b - my) ** 2 for b in ry)
    if vx == 0 or vy == 0:
        return None
    return cov / (vx * vy) ** 0.5


def emit_report(
    records: list[BenchRecord], config: QueryGenConfig | None = None
) -> tuple[str, dict]:
    """Render records as CSV text plus a JSON-ready summary."""
    if not records:
        raise ValueError("no benchmark records to report")
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(
        [
            "query",
            "total_leaves",
            "median_leaves_evaluated",
            "matched",
            "t_short_ms",
            "t_full_ms",
        ]
    )
    for r in records:
        writer.writerow(
            [
                r.query,
                r.total_leaves,
                r.median_leaves_evaluated,
                r.matched_count,
                f"{r.t_short_ms:.4f}",
                f"{r.t_full_ms:.4f}",
            ]
        )
    speedups = sorted(
        r.t_full_ms / r.t_short_ms for r in records if r.t_short_ms > 0
    )
    summary = {
        "queries": len(records),
        "generator_profile": config.profile() if config else None,
        "spearman_leaves_vs_time": spearman(
            [r.median_leaves_evaluated for r in records],
            [r.t_short_ms for r in records],
        ),
        "speedup_full_over_short": {
            "min": speedups[0] if speedups else None,
            "median": median(speedups) if speedups else None,
            "max": speedups[-1] if speedups else None,
        },
    }
    return out.getvalue(), summary


def make_synthetic_log(
    seed: int, n_traces: int = 500, alphabet_size: int = 8, log_id: str = "synthetic"
) -> EventLog:
    """Deterministic synthetic log with sequential and parallel structure.

    Traces are built from consecutive blocks whose instances overlap in
    time, so both chains and genuine parallelism occur; equal completion
    times and missing starts are sprinkled in deliberately.
    """
    labels = [chr(ord("A") + i) for i in range(min(alphabet_size, 26))]
    rng = random.Random(seed)
    traces = []
    counter = 0
    for t in range(n_traces):
        case_id = f"s{t + 1}"
        instances: list[ActivityInstance] = []
        clock = 0
        for _ in range(rng.randint(3, 8)):
            width = rng.randint(1, 4)
            for _ in range(width):
                counter += 1
                start: int | None = clock + rng.randrange(0, 3) * 10
                complete = clock + 40 + rng.randrange(0, 5) * 10
                if rng.random() < 0.3:
                    start = None
                instances.append(
                    ActivityInstance(
                        id=str(counter),
                        case_id=case_id,
                        label=rng.choice(labels),
                        start=start,
                        complete=complete,
                    )
                )
            clock += 200
        traces.append(build_order(instances))
    return EventLog(log_id=log_id, traces=tuple(traces))
