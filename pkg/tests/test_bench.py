"""Query generation, pre-selection, timing records, and report emission."""

import pytest

from poq.bench import (
    BenchRecord,
    GenerationExhausted,
    QueryGenConfig,
    emit_report,
    generate_queries,
    make_synthetic_log,
    run_bench,
    spearman,
)
from poq.evaluator import Mode, eval_log, eval_query
from poq.ast import format_query, leaf_count
from poq.parser import parse
from fixtures import TREE_QUERY


class TestGenerateQueries:
    def test_five_queries_each_match_exactly_one_case(self, credit_log):
        queries = generate_queries(credit_log, QueryGenConfig(seed=1), 5)
        assert len(queries) == 5
        for q in queries:
            matched = sum(
                1 for t in credit_log.traces if eval_query(t, q).matched
            )
            assert matched == 1  # two traces: strictly-between means exactly one

    def test_zero_queries(self, credit_log):
        assert generate_queries(credit_log, QueryGenConfig(seed=1), 0) == []

    def test_single_trace_log_exhausts(self, credit_log):
        from poq.model import EventLog

        solo = EventLog(log_id="solo", traces=(credit_log.traces[1],))
        with pytest.raises(GenerationExhausted):
            generate_queries(solo, QueryGenConfig(seed=1), 1)

    def test_deterministic_for_fixed_seed(self, credit_log):
        a = generate_queries(credit_log, QueryGenConfig(seed=9), 8)
        b = generate_queries(credit_log, QueryGenConfig(seed=9), 8)
        assert [format_query(q) for q in a] == [format_query(q) for q in b]

    def test_generated_queries_reparse(self, credit_log):
        for q in generate_queries(credit_log, QueryGenConfig(seed=4), 10):
            assert parse(format_query(q)) == q


class TestRunBench:
    def test_single_query_record(self, credit_log):
        records = run_bench(credit_log, [parse("'DC' isC =2")], repetitions=3)
        assert len(records) == 1
        r = records[0]
        assert r.total_leaves == 1
        assert r.matched_count == 1
        assert r.t_short_ms > 0 and r.t_full_ms > 0

    def test_tree_query_median_leaves(self, credit_log):
        records = run_bench(credit_log, [parse(TREE_QUERY)], repetitions=2)
        r = records[0]
        # Both cases stop after two leaves, so the median is exactly two.
        assert r.median_leaves_evaluated == 2.0
        assert r.total_leaves == 4

    def test_modes_agree_on_matches(self, credit_log):
        query = parse(TREE_QUERY)
        short = eval_log(credit_log, query, Mode.SHORT_CIRCUIT)
        full = eval_log(credit_log, query, Mode.FULL)
        assert short.matched_trace_ids == full.matched_trace_ids


class TestEmitReport:
    def _record(self, leaves=3.0, t_short=1.0):
        return BenchRecord(
            query="'A' isC",
            total_leaves=4,
            median_leaves_evaluated=leaves,
            matched_count=1,
            t_short_ms=t_short,
            t_full_ms=t_short * 2,
        )

    def test_csv_shape(self):
        csv_text, summary = emit_report([self._record() for _ in range(10)])
        lines = csv_text.strip().splitlines()
        assert len(lines) == 11
        assert lines[0] == (
            "query,total_leaves,median_leaves_evaluated,matched,t_short_ms,t_full_ms"
        )
        assert summary["queries"] == 10

    def test_identical_leaf_counts_make_correlation_null(self):
        _, summary = emit_report([self._record(leaves=2.0) for _ in range(5)])
        assert summary["spearman_leaves_vs_time"] is None

    def test_varied_records_correlate(self):
        records = [
            self._record(leaves=float(i), t_short=float(i) * 0.5 + 0.1)
            for i in range(1, 20)
        ]
        _, summary = emit_report(records)
        assert summary["spearman_leaves_vs_time"] == pytest.approx(1.0)

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            emit_report([])

    def test_non_timing_columns_deterministic(self, credit_log):
        def run(seed):
            queries = generate_queries(credit_log, QueryGenConfig(seed=seed), 6)
            records = run_bench(credit_log, queries, repetitions=1)
            csv_text, _ = emit_report(records)
            rows = [line.split(",")[:4] for line in csv_text.splitlines()]
            return rows

        assert run(3) == run(3)


class TestSpearman:
    def test_perfect_monotone(self):
        assert spearman([1, 2, 3], [10, 20, 30]) == pytest.approx(1.0)

    def test_perfect_inverse(self):
        assert spearman([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)

    def test_ties_average(self):
        r = spearman([1.0, 1.0, 2.0, 3.0], [1.0, 2.0, 3.0, 4.0])
        assert r is not None and 0.9 < r <= 1.0

    def test_constant_is_undefined(self):
        assert spearman([1, 1, 1], [1, 2, 3]) is None


class TestSyntheticLog:
    def test_deterministic(self):
        a = make_synthetic_log(seed=5, n_traces=20)
        b = make_synthetic_log(seed=5, n_traces=20)
        assert [t.order for t in a.traces] == [t.order for t in b.traces]
        assert [
            [x.label for x in t.instances] for t in a.traces
        ] == [[x.label for x in t.instances] for t in b.traces]

    def test_has_parallelism_and_ties(self):
        log = make_synthetic_log(seed=5, n_traces=50)
        assert any(
            any(
                (a.id, b.id) not in t.order and (b.id, a.id) not in t.order
                for a in t.instances
                for b in t.instances
                if a.id != b.id
            )
            for t in log.traces
        )
        assert any(a.start is None for t in log.traces for a in t.instances)
