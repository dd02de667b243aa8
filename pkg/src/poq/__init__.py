"""Query engine for event logs with partially ordered activity instances."""

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
from .canonical import VariantGroup, group_variants, variant_key
from .evaluator import (
    EvalOutcome,
    LogResult,
    Mode,
    eval_leaf,
    eval_log,
    eval_query,
)
from .ingest import CsvColumns, ingest_csv, ingest_xes, to_csv
from .model import (
    ActivityInstance,
    EventLog,
    Trace,
    build_order,
    maximal_elements,
    minimal_elements,
    transitive_reduction,
)
from .parser import ParseError, highlight, parse, tokenize
from .rewrite import desugar, equivalence_suite, nonequivalence_witnesses

__version__ = "0.1.0"

__all__ = [
    "ActivityInstance",
    "And",
    "CardOp",
    "Cardinality",
    "CsvColumns",
    "EvalOutcome",
    "EventLog",
    "LabelSet",
    "Leaf",
    "LeafQuery",
    "LogResult",
    "Mode",
    "Not",
    "Op",
    "Or",
    "ParseError",
    "Query",
    "SetMode",
    "Trace",
    "VariantGroup",
    "build_order",
    "desugar",
    "equivalence_suite",
    "eval_leaf",
    "eval_log",
    "eval_query",
    "format_query",
    "group_variants",
    "highlight",
    "ingest_csv",
    "ingest_xes",
    "leaf_count",
    "maximal_elements",
    "minimal_elements",
    "nonequivalence_witnesses",
    "parse",
    "to_csv",
    "tokenize",
    "transitive_reduction",
    "variant_key",
]
