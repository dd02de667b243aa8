"""Equivalence-preserving rewrites and the documented non-equivalences.

Desugaring expands everything that is mere notation: default cardinalities
on unary leaves, ANY/ALL sets on the unary side and on the left of a binary
operator, and right-side ALL without a cardinality.  Right-side ANY (with or
without cardinality) and right-side ALL with cardinality stay: expanding
them changes meaning, which :func:`nonequivalence_witnesses` demonstrates
with concrete traces.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterable

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
)
from .model import ActivityInstance, Trace, build_order

GEQ_ONE = Cardinality(CardOp.GEQ, 1)


def _fold(parts: list[Query], conjunctive: bool) -> Query:
    node = parts[0]
    for part in parts[1:]:
        node = And(node, part) if conjunctive else Or(node, part)
    return node


def _expand_left(leaf: Leaf) -> Query:
    """Distribute a unary-side or binary-left set over singleton leaves."""
    parts: list[Query] = [
        LeafQuery(
            Leaf(
                op=leaf.op,
                left=LabelSet.single(label),
                right=leaf.right,
                card=leaf.card,
            )
        )
        for label in leaf.left.labels
    ]
    return _fold(parts, conjunctive=leaf.left.mode is SetMode.ALL)


def desugar_leaf(leaf: Leaf) -> Query:
    if not leaf.left.is_single:
        return _desugar(_expand_left(leaf))
    if leaf.op.is_unary:
        if leaf.card is None:
            return LeafQuery(Leaf(op=leaf.op, left=leaf.left, card=GEQ_ONE))
        return LeafQuery(leaf)
    right = leaf.right
    assert right is not None
    if right.mode is SetMode.ALL and leaf.card is None:
        parts: list[Query] = [
            LeafQuery(
                Leaf(op=leaf.op, left=leaf.left, right=LabelSet.single(label))
            )
            for label in right.labels
        ]
        return _fold(parts, conjunctive=True)
    return LeafQuery(leaf)


def _desugar(query: Query) -> Query:
    if isinstance(query, LeafQuery):
        return desugar_leaf(query.leaf)
    if isinstance(query, Not):
        return Not(_desugar(query.child))
    if isinstance(query, And):
        return And(_desugar(query.left), _desugar(query.right))
    return Or(_desugar(query.left), _desugar(query.right))


def desugar(query: Query) -> Query:
    """Expand notational sugar; idempotent and meaning-preserving."""
    return _desugar(query)


# ---------------------------------------------------------------------------
# Equivalence rules as randomized generators for property testing

@dataclass(frozen=True)
class RewriteRule:
    name: str
    description: str


PairGen = Callable[[random.Random], tuple[Query, Query]]

_ALPHABET = ("A", "B", "C", "D", "E", "F")


def _labels(rng: random.Random, n: int) -> list[str]:
    return rng.sample(_ALPHABET, n)


def _unary_op(rng: random.Random) -> Op:
    return rng.choice((Op.IS_C, Op.IS_S, Op.IS_E))


def _binary_op(rng: random.Random) -> Op:
    return rng.choice((Op.IS_DF, Op.IS_EF, Op.IS_P))


def _card(rng: random.Random) -> Cardinality:
    return Cardinality(rng.choice(tuple(CardOp)), rng.randint(0, 4))


def _unary_leaf(op: Op, label: str, card: Cardinality | None = None) -> LeafQuery:
    return LeafQuery(Leaf(op=op, left=LabelSet.single(label), card=card))


def _binary_leaf(
    op: Op,
    left: LabelSet,
    right: LabelSet,
    card: Cardinality | None = None,
) -> LeafQuery:
    return LeafQuery(Leaf(op=op, left=left, right=right, card=card))


def _set(rng: random.Random, labels: Iterable[str]) -> LabelSet:
    mode = rng.choice((SetMode.ANY, SetMode.ALL))
    return LabelSet(mode, tuple(labels))


def _gen_unary_default(rng: random.Random) -> tuple[Query, Query]:
    op, (label,) = _unary_op(rng), _labels(rng, 1)
    return _unary_leaf(op, label), _unary_leaf(op, label, GEQ_ONE)


def _gen_unary_set(mode: SetMode, with_card: bool) -> PairGen:
    def gen(rng: random.Random) -> tuple[Query, Query]:
        op = _unary_op(rng)
        labels = _labels(rng, rng.randint(1, 3))
        card = _card(rng) if with_card else None
        lhs = LeafQuery(Leaf(op=op, left=LabelSet(mode, tuple(labels)), card=card))
        rhs = _fold(
            [_unary_leaf(op, label, card) for label in labels],
            conjunctive=mode is SetMode.ALL,
        )
        return lhs, rhs

    return gen


def _gen_left_set(mode: SetMode, with_card: bool) -> PairGen:
    def gen(rng: random.Random) -> tuple[Query, Query]:
        op = _binary_op(rng)
        k = rng.randint(1, 3)
        labels = _labels(rng, k + 1)
        left_labels, right_label = labels[:k], labels[k]
        card = _card(rng) if with_card else None
        lhs = _binary_leaf(
            op, LabelSet(mode, tuple(left_labels)), LabelSet.single(right_label), card
        )
        rhs = _fold(
            [
                _binary_leaf(
                    op,
                    LabelSet.single(label),
                    LabelSet.single(right_label),
                    card,
                )
                for label in left_labels
            ],
            conjunctive=mode is SetMode.ALL,
        )
        return lhs, rhs

    return gen


def _gen_right_all_plain(rng: random.Random) -> tuple[Query, Query]:
    op = _binary_op(rng)
    k = rng.randint(1, 3)
    labels = _labels(rng, k + 1)
    left, right_labels = labels[0], labels[1:]
    lhs = _binary_leaf(
        op, LabelSet.single(left), LabelSet(SetMode.ALL, tuple(right_labels))
    )
    rhs = _fold(
        [
            _binary_leaf(op, LabelSet.single(left), LabelSet.single(label))
            for label in right_labels
        ],
        conjunctive=True,
    )
    return lhs, rhs


def _gen_eq_split(unary: bool) -> PairGen:
    # =k holds exactly when >=k and <=k both hold.
    def gen(rng: random.Random) -> tuple[Query, Query]:
        k = rng.randint(0, 4)
        if unary:
            op, (label,) = _unary_op(rng), _labels(rng, 1)
            mk = lambda co: _unary_leaf(op, label, Cardinality(co, k))
        else:
            op = _binary_op(rng)
            l1, l2 = _labels(rng, 2)
            mk = lambda co: _binary_leaf(
                op,
                LabelSet.single(l1),
                LabelSet.single(l2),
                Cardinality(co, k),
            )
        return mk(CardOp.EQ), And(mk(CardOp.GEQ), mk(CardOp.LEQ))

    return gen


def _gen_right_singleton(mode: SetMode) -> PairGen:
    # One-element right sets collapse to the single-label form.  ANY may
    # appear with or without cardinality; ALL only with one (the plain form
    # is covered by its own expansion rule).
    def gen(rng: random.Random) -> tuple[Query, Query]:
        op = _binary_op(rng)
        l1, l2 = _labels(rng, 2)
        card = _card(rng) if mode is SetMode.ALL or rng.random() < 0.5 else None
        lhs = _binary_leaf(op, LabelSet.single(l1), LabelSet(mode, (l2,)), card)
        rhs = _binary_leaf(op, LabelSet.single(l1), LabelSet.single(l2), card)
        return lhs, rhs

    return gen


def equivalence_suite() -> list[tuple[RewriteRule, PairGen]]:
    """The fourteen rewrite rules, each with a randomized instantiator."""
    return [
        (
            RewriteRule("unary-default-cardinality", "plain unary means at least one"),
            _gen_unary_default,
        ),
        (
            RewriteRule("unary-any-plain", "ANY set on a unary operator is an OR"),
            _gen_unary_set(SetMode.ANY, with_card=False),
        ),
        (
            RewriteRule("unary-all-plain", "ALL set on a unary operator is an AND"),
            _gen_unary_set(SetMode.ALL, with_card=False),
        ),
        (
            RewriteRule("unary-any-card", "cardinality distributes over unary ANY"),
            _gen_unary_set(SetMode.ANY, with_card=True),
        ),
        (
            RewriteRule("unary-all-card", "cardinality distributes over unary ALL"),
            _gen_unary_set(SetMode.ALL, with_card=True),
        ),
        (
            RewriteRule("binary-left-any-plain", "left ANY is an OR of singletons"),
            _gen_left_set(SetMode.ANY, with_card=False),
        ),
        (
            RewriteRule("binary-left-all-plain", "left ALL is an AND of singletons"),
            _gen_left_set(SetMode.ALL, with_card=False),
        ),
        (
            RewriteRule("binary-left-any-card", "cardinality distributes over left ANY"),
            _gen_left_set(SetMode.ANY, with_card=True),
        ),
        (
            RewriteRule("binary-left-all-card", "cardinality distributes over left ALL"),
            _gen_left_set(SetMode.ALL, with_card=True),
        ),
        (
            RewriteRule("binary-right-all-plain", "plain right ALL is an AND of singletons"),
            _gen_right_all_plain,
        ),
        (
            RewriteRule("cardinality-eq-split-unary", "unary =k is >=k AND <=k"),
            _gen_eq_split(unary=True),
        ),
        (
            RewriteRule("cardinality-eq-split-binary", "binary =k is >=k AND <=k"),
            _gen_eq_split(unary=False),
        ),
        (
            RewriteRule("right-any-singleton", "one-element right ANY is the single form"),
            _gen_right_singleton(SetMode.ANY),
        ),
        (
            RewriteRule("right-all-singleton", "one-element right ALL is the single form"),
            _gen_right_singleton(SetMode.ALL),
        ),
    ]


# ---------------------------------------------------------------------------
# Non-equivalences, each with a trace on which the pair disagrees

@dataclass(frozen=True)
class NonEquivalence:
    name: str
    lhs: Query
    rhs: Query
    witness: Trace
    note: str


def _instance(
    id: str, label: str, start: int | None, complete: int, case: str = "w"
) -> ActivityInstance:
    return ActivityInstance(
        id=id, case_id=case, label=label, start=start, complete=complete
    )


def _two_block_trace() -> Trace:
    # Two sequential phases: first an A overlapping a B, then an A
    # overlapping a C.  Each A is incomparable with exactly one partner.
    return build_order(
        [
            _instance("a1", "A", 0, 100),
            _instance("b1", "B", 50, 150),
            _instance("a2", "A", 200, 300),
            _instance("c1", "C", 250, 350),
        ]
    )


def _four_a_trace() -> Trace:
    # Four A instances: two overlap only B instances, two only C instances.
    return build_order(
        [
            _instance("a1", "A", 0, 100),
            _instance("b1", "B", 50, 150),
            _instance("a2", "A", 200, 300),
            _instance("b2", "B", 250, 350),
            _instance("a3", "A", 400, 500),
            _instance("c1", "C", 450, 550),
            _instance("a4", "A", 600, 700),
            _instance("c2", "C", 650, 750),
        ]
    )


def _chain_trace() -> Trace:
    # A strict chain A -> B -> A -> C: each A directly precedes one partner.
    return build_order(
        [
            _instance("a1", "A", 0, 10),
            _instance("b1", "B", 20, 30),
            _instance("a2", "A", 40, 50),
            _instance("c1", "C", 60, 70),
        ]
    )


def nonequivalence_witnesses() -> list[NonEquivalence]:
    """The three pairs that look like sugar but are not, with witnesses."""
    any_bc = LabelSet.any_of("B", "C")
    all_bc = LabelSet.all_of("B", "C")
    single = LabelSet.single
    leq2 = Cardinality(CardOp.LEQ, 2)

    return [
        NonEquivalence(
            name="right-any-plain",
            lhs=_binary_leaf(Op.IS_P, single("A"), any_bc),
            rhs=Or(
                _binary_leaf(Op.IS_P, single("A"), single("B")),
                _binary_leaf(Op.IS_P, single("A"), single("C")),
            ),
            witness=_two_block_trace(),
            note=(
                "every A runs beside a B or a C, but neither label covers "
                "all A instances on its own"
            ),
        ),
        NonEquivalence(
            name="right-any-card",
            lhs=_binary_leaf(Op.IS_P, single("A"), any_bc, leq2),
            rhs=Or(
                _binary_leaf(Op.IS_P, single("A"), single("B"), leq2),
                _binary_leaf(Op.IS_P, single("A"), single("C"), leq2),
            ),
            witness=_four_a_trace(),
            note=(
                "four A instances run beside a B or a C, yet only two run "
                "beside a B and only two beside a C"
            ),
        ),
        NonEquivalence(
            name="right-all-card",
            lhs=_binary_leaf(Op.IS_DF, single("A"), all_bc, GEQ_ONE),
            rhs=And(
                _binary_leaf(Op.IS_DF, single("A"), single("B"), GEQ_ONE),
                _binary_leaf(Op.IS_DF, single("A"), single("C"), GEQ_ONE),
            ),
            witness=_chain_trace(),
            note=(
                "some A is directly followed by a B and some A by a C, "
                "but no single A is directly followed by both"
            ),
        ),
    ]
