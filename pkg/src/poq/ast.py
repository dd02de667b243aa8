"""Query trees: leaf constraints combined with NOT / AND / OR.

A leaf pairs one of six control-flow operators with a label (or an ANY/ALL
label set on exactly one side) and an optional cardinality.  Trees are
immutable; structural equality is plain dataclass equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Union

MAX_CARDINALITY = 10**9


class QueryStructureError(ValueError):
    """A leaf combines operands in a shape the language does not allow."""


class Op(Enum):
    IS_C = "isC"
    IS_S = "isS"
    IS_E = "isE"
    IS_DF = "isDF"
    IS_EF = "isEF"
    IS_P = "isP"

    @property
    def is_unary(self) -> bool:
        return self in (Op.IS_C, Op.IS_S, Op.IS_E)

    @property
    def long_name(self) -> str:
        return _LONG_NAMES[self]


_LONG_NAMES = {
    Op.IS_C: "isContained",
    Op.IS_S: "isStart",
    Op.IS_E: "isEnd",
    Op.IS_DF: "isDirectlyFollowed",
    Op.IS_EF: "isEventuallyFollowed",
    Op.IS_P: "isParallel",
}


class CardOp(Enum):
    EQ = "="
    LEQ = "<="
    GEQ = ">="


@dataclass(frozen=True)
class Cardinality:
    op: CardOp
    k: int

    def __post_init__(self) -> None:
        if not 0 <= self.k <= MAX_CARDINALITY:
            raise QueryStructureError(
                f"cardinality {self.k} outside 0..{MAX_CARDINALITY}"
            )

    def __str__(self) -> str:
        return f"{self.op.value}{self.k}"


class SetMode(Enum):
    SINGLE = "single"
    ANY = "ANY"
    ALL = "ALL"


@dataclass(frozen=True)
class LabelSet:
    """A single label or an ANY/ALL set; duplicates collapse to the first."""

    mode: SetMode
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        deduped = tuple(dict.fromkeys(self.labels))
        object.__setattr__(self, "labels", deduped)
        if not deduped or any(not label for label in deduped):
            raise QueryStructureError("label sets need at least one non-empty label")
        if self.mode is SetMode.SINGLE and len(deduped) != 1:
            raise QueryStructureError("a single operand holds exactly one label")

    @property
    def is_single(self) -> bool:
        return self.mode is SetMode.SINGLE

    @property
    def label(self) -> str:
        if not self.is_single:
            raise QueryStructureError("operand is a set, not a single label")
        return self.labels[0]

    @classmethod
    def single(cls, label: str) -> "LabelSet":
        return cls(SetMode.SINGLE, (label,))

    @classmethod
    def any_of(cls, *labels: str) -> "LabelSet":
        return cls(SetMode.ANY, tuple(labels))

    @classmethod
    def all_of(cls, *labels: str) -> "LabelSet":
        return cls(SetMode.ALL, tuple(labels))


@dataclass(frozen=True)
class Leaf:
    """One control-flow constraint."""

    op: Op
    left: LabelSet
    right: LabelSet | None = None
    card: Cardinality | None = None

    def __post_init__(self) -> None:
        if self.op.is_unary:
            if self.right is not None:
                raise QueryStructureError(f"{self.op.value} takes a single operand")
        else:
            if self.right is None:
                raise QueryStructureError(f"{self.op.value} needs a right operand")
            if not self.left.is_single and not self.right.is_single:
                raise QueryStructureError(
                    "at most one side of a binary constraint may be a label set"
                )


@dataclass(frozen=True)
class LeafQuery:
    leaf: Leaf


@dataclass(frozen=True)
class Not:
    child: "Query"


@dataclass(frozen=True)
class And:
    left: "Query"
    right: "Query"


@dataclass(frozen=True)
class Or:
    left: "Query"
    right: "Query"


Query = Union[LeafQuery, Not, And, Or]


def leaf_count(query: Query) -> int:
    if isinstance(query, LeafQuery):
        return 1
    if isinstance(query, Not):
        return leaf_count(query.child)
    return leaf_count(query.left) + leaf_count(query.right)


def iter_leaves(query: Query) -> Iterator[Leaf]:
    if isinstance(query, LeafQuery):
        yield query.leaf
    elif isinstance(query, Not):
        yield from iter_leaves(query.child)
    else:
        yield from iter_leaves(query.left)
        yield from iter_leaves(query.right)


def _quote(label: str) -> str:
    return "'" + label.replace("'", "''") + "'"


def _operand(operand: LabelSet) -> str:
    if operand.is_single:
        return _quote(operand.label)
    inner = ",".join(_quote(label) for label in operand.labels)
    return f"{operand.mode.value}{{{inner}}}"


def format_leaf(leaf: Leaf) -> str:
    parts = [_operand(leaf.left), leaf.op.value]
    if leaf.right is not None:
        parts.append(_operand(leaf.right))
    if leaf.card is not None:
        parts.append(str(leaf.card))
    return " ".join(parts)


def format_query(query: Query) -> str:
    """Canonical fully parenthesized text; parses back to an equal tree."""
    if isinstance(query, LeafQuery):
        return format_leaf(query.leaf)
    if isinstance(query, Not):
        return f"NOT({format_query(query.child)})"
    joiner = "AND" if isinstance(query, And) else "OR"
    return f"({format_query(query.left)} {joiner} {format_query(query.right)})"
