"""Command-line entry point: query, variants, desugar, bench, serve.

Exit codes: 0 success, 2 query syntax error, 3 data or file error,
4 internal error.
"""

from __future__ import annotations

import json
import pathlib
import sys

import click

from . import payloads
from .ast import format_query
from .bench import QueryGenConfig, emit_report, generate_queries, run_bench
from .evaluator import Mode
from .ingest import CsvColumns, IngestError, ingest_csv, ingest_xes, log_from_dict
from .model import EventLog, LogError
from .parser import ParseError, parse
from .rewrite import desugar as desugar_query

EXIT_SYNTAX = 2
EXIT_DATA = 3
EXIT_INTERNAL = 4


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _show_parse_error(text: str, exc: ParseError) -> None:
    click.echo(f"error: {exc.message} (line {exc.line}, column {exc.column})", err=True)
    lines = text.splitlines() or [""]
    line = lines[exc.line - 1] if exc.line - 1 < len(lines) else ""
    click.echo(f"  {line}", err=True)
    click.echo(f"  {' ' * (exc.column - 1)}^", err=True)
    sys.exit(EXIT_SYNTAX)


def _load_log(path: str, columns: CsvColumns) -> EventLog:
    p = pathlib.Path(path)
    try:
        data = p.read_bytes()
    except OSError as exc:
        _fail(EXIT_DATA, f"cannot read {path}: {exc}")
    name = p.name.lower()
    try:
        if name.endswith(".csv"):
            return ingest_csv(data, columns, log_id=p.stem)
        if name.endswith((".xes", ".xes.gz")):
            return ingest_xes(data, log_id=p.stem.replace(".xes", ""))
        if name.endswith(".json"):
            return log_from_dict(json.loads(data))
    except (IngestError, LogError, json.JSONDecodeError, KeyError) as exc:
        _fail(EXIT_DATA, f"cannot ingest {path}: {exc}")
    _fail(EXIT_DATA, f"unsupported log format: {path} (use .csv, .xes, .xes.gz, .json)")
    raise AssertionError("unreachable")


def _read_query(query: str | None, query_file: str | None) -> str:
    if (query is None) == (query_file is None):
        _fail(EXIT_DATA, "provide a query either as an argument or via --query-file")
    if query is not None:
        return query
    try:
        return pathlib.Path(query_file).read_text(encoding="utf-8").strip()
    except OSError as exc:
        _fail(EXIT_DATA, f"cannot read query file: {exc}")
    raise AssertionError("unreachable")


_csv_options = [
    click.option("--case-col", default="case", show_default=True),
    click.option("--activity-col", default="activity", show_default=True),
    click.option("--start-col", default="start", show_default=True),
    click.option("--complete-col", default="complete", show_default=True),
]


def csv_options(f):
    for option in reversed(_csv_options):
        f = option(f)
    return f


def _columns(case_col, activity_col, start_col, complete_col) -> CsvColumns:
    return CsvColumns(
        case=case_col, activity=activity_col, start=start_col, complete=complete_col
    )


@click.group()
def main() -> None:
    """Query partially ordered event logs."""


@main.command()
@click.option("--log", "log_path", required=True, type=click.Path())
@click.argument("query", required=False)
@click.option("--query-file", type=click.Path())
@click.option(
    "--mode",
    type=click.Choice(["short", "full"]),
    default="short",
    show_default=True,
)
@click.option(
    "--json/--table",
    "as_json",
    default=False,
    help="emit the service JSON body instead of the table view",
)
@csv_options
def query(log_path, query, query_file, mode, as_json, case_col, activity_col, start_col, complete_col):
    """Evaluate a query against a log."""
    text = _read_query(query, query_file)
    event_log = _load_log(log_path, _columns(case_col, activity_col, start_col, complete_col))
    eval_mode = Mode.SHORT_CIRCUIT if mode == "short" else Mode.FULL
    try:
        payload = payloads.query_payload(event_log, text, eval_mode)
    except ParseError as exc:
        _show_parse_error(text, exc)
        return
    except Exception as exc:  # pragma: no cover - defensive
        _fail(EXIT_INTERNAL, f"internal error: {exc}")
        return
    if as_json:
        click.echo(payloads.dumps(payload))
        return
    click.echo(
        f"{payload['matched_trace_count']}/{payload['trace_count']} traces matched "
        f"({payload['matched_variant_count']}/{payload['variant_count']} variants)"
    )
    for variant in payload["matched_variants"]:
        click.echo(f"  variant {variant['key'][:12]}  traces={variant['count']}")
    metrics = payload["metrics"]
    click.echo(
        f"leaves: {metrics['median_leaves_evaluated']}/{metrics['total_leaves']} "
        f"(median evaluated/total), {metrics['wall_time_ms']} ms"
    )


@main.command()
@click.option("--log", "log_path", required=True, type=click.Path())
@csv_options
def variants(log_path, case_col, activity_col, start_col, complete_col):
    """List trace variants of a log, largest first."""
    event_log = _load_log(log_path, _columns(case_col, activity_col, start_col, complete_col))
    payload = payloads.variants_payload(event_log)
    click.echo(f"{payload['trace_count']} traces, {payload['variant_count']} variants")
    for variant in payload["variants"]:
        labels = [n["label"] for n in variant["nodes"]]
        click.echo(
            f"  {variant['key'][:12]}  traces={variant['count']}  "
            f"activities={','.join(labels)}"
        )


@main.command()
@click.argument("query", required=False)
@click.option("--query-file", type=click.Path())
def desugar(query, query_file):
    """Print the desugared form of a query."""
    text = _read_query(query, query_file)
    try:
        tree = parse(text)
    except ParseError as exc:
        _show_parse_error(text, exc)
        return
    click.echo(format_query(desugar_query(tree)))


@main.command()
@click.option("--log", "log_path", required=True, type=click.Path())
@click.option("--n", default=200, show_default=True)
@click.option("--seed", default=42, show_default=True)
@click.option("--reps", default=5, show_default=True)
@click.option("--out", required=True, type=click.Path())
@csv_options
def bench(log_path, n, seed, reps, out, case_col, activity_col, start_col, complete_col):
    """Generate pre-selected queries, time both modes, write CSV + JSON."""
    event_log = _load_log(log_path, _columns(case_col, activity_col, start_col, complete_col))
    config = QueryGenConfig(seed=seed)
    try:
        queries = generate_queries(event_log, config, n)
    except Exception as exc:
        _fail(EXIT_DATA, f"query generation failed: {exc}")
        return
    records = run_bench(event_log, queries, repetitions=reps)
    csv_text, summary = emit_report(records, config)
    out_path = pathlib.Path(out)
    out_path.write_text(csv_text, encoding="utf-8")
    summary_path = out_path.with_suffix(".json")
    summary_path.write_text(json.dumps(summary, indent=2), encoding="utf-8")
    click.echo(f"wrote {out_path} and {summary_path}")
    click.echo(
        f"spearman(leaves, t_short) = {summary['spearman_leaves_vs_time']}, "
        f"median speedup = {summary['speedup_full_over_short']['median']}"
    )


@main.command()
@click.option("--port", default=8000, show_default=True, type=click.IntRange(1, 65535))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option(
    "--log-dir",
    type=click.Path(exists=True, file_okay=False),
    help="preload every .csv/.xes/.xes.gz log in this directory",
)
@click.option(
    "--console-dir",
    type=click.Path(exists=True, file_okay=False),
    help="serve a built query console from this directory",
)
def serve(port, host, log_dir, console_dir):
    """Run the HTTP service (blocks until interrupted)."""
    import uvicorn

    from .service import LogStore, create_app, guess_format, ingest_named

    store = LogStore()
    if log_dir:
        for path in sorted(pathlib.Path(log_dir).iterdir()):
            fmt = guess_format(path.name)
            if fmt is None:
                continue
            try:
                log_id, _ = store.add(ingest_named(path.read_bytes(), fmt, path.name), path.name)
            except (IngestError, LogError) as exc:
                _fail(EXIT_DATA, f"cannot preload {path.name}: {exc}")
            click.echo(f"loaded {path.name} as {log_id}")
    app = create_app(
        store=store,
        console_dir=pathlib.Path(console_dir) if console_dir else None,
    )
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except OSError as exc:
        _fail(EXIT_DATA, f"cannot bind {host}:{port}: {exc}")


if __name__ == "__main__":
    main()
