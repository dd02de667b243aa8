"""Desugaring, the fourteen equivalence rules, and the three non-equivalences."""

import random

import pytest

from fixtures import random_trace
from oracles import oracle_eval_query

from poq.ast import SetMode, format_query, iter_leaves
from poq.evaluator import eval_query
from poq.parser import parse
from poq.rewrite import (
    desugar,
    equivalence_suite,
    nonequivalence_witnesses,
)


class TestDesugar:
    def test_all_set_on_unary_becomes_and(self):
        got = desugar(parse("ALL{'A','B'} isE"))
        assert format_query(got) == "('A' isE >=1 AND 'B' isE >=1)"

    def test_plain_unary_gets_default_cardinality(self):
        assert format_query(desugar(parse("'A' isC"))) == "'A' isC >=1"

    def test_right_all_without_cardinality_becomes_and(self):
        got = desugar(parse("'A' isDF ALL{'B','C'}"))
        assert format_query(got) == "('A' isDF 'B' AND 'A' isDF 'C')"

    def test_right_any_kept(self):
        q = parse("'A' isDF ANY{'B','C'}")
        assert desugar(q) == q
        q2 = parse("'A' isP ANY{'B','C'} <=2")
        assert desugar(q2) == q2

    def test_right_all_with_cardinality_kept(self):
        q = parse("'A' isEF ALL{'B','C'} >=1")
        assert desugar(q) == q

    def test_output_shape(self):
        # Only unary singles with explicit cardinality, binary singles on the
        # left, and right sets that are not sugar.
        rng = random.Random(5)
        for _ in range(200):
            q = _random_sugar_query(rng)
            for leaf in iter_leaves(desugar(q)):
                assert leaf.left.is_single
                if leaf.op.is_unary:
                    assert leaf.card is not None
                elif leaf.right is not None and not leaf.right.is_single:
                    assert leaf.right.mode is SetMode.ANY or leaf.card is not None

    def test_idempotent_and_meaning_preserving(self):
        rng = random.Random(11)
        for _ in range(150):
            q = _random_sugar_query(rng)
            once = desugar(q)
            assert desugar(once) == once
            trace = random_trace(rng, max_instances=8, alphabet="ABCD")
            assert (
                eval_query(trace, q).matched == eval_query(trace, once).matched
            )


def _random_sugar_query(rng: random.Random, depth: int = 0):
    from poq.ast import And, Cardinality, CardOp, LabelSet, Leaf, LeafQuery, Not, Op, Or

    if depth < 2 and rng.random() < 0.4:
        roll = rng.random()
        if roll < 0.25:
            return Not(_random_sugar_query(rng, depth + 1))
        mk = And if roll < 0.6 else Or
        return mk(
            _random_sugar_query(rng, depth + 1), _random_sugar_query(rng, depth + 1)
        )
    op = rng.choice(list(Op))
    labels = ["A", "B", "C", "D"]
    card = None
    if rng.random() < 0.5:
        card = Cardinality(rng.choice(list(CardOp)), rng.randint(0, 3))

    def operand():
        if rng.random() < 0.5:
            mode = rng.choice([SetMode.ANY, SetMode.ALL])
            return LabelSet(mode, tuple(rng.sample(labels, rng.randint(1, 3))))
        return LabelSet.single(rng.choice(labels))

    if op.is_unary:
        return LeafQuery(Leaf(op, operand(), card=card))
    left = operand()
    right = operand()
    if not left.is_single and not right.is_single:
        left = LabelSet.single(left.labels[0])
    return LeafQuery(Leaf(op, left, right, card))


class TestEquivalenceSuite:
    def test_has_fourteen_rules(self):
        assert len(equivalence_suite()) == 14
        names = [rule.name for rule, _ in equivalence_suite()]
        assert len(set(names)) == 14

    @pytest.mark.parametrize("rule_index", range(14))
    def test_rule_holds_on_samples(self, rule_index):
        rule, gen = equivalence_suite()[rule_index]
        rng = random.Random(rule_index * 97 + 1)
        for _ in range(60):
            lhs, rhs = gen(rng)
            trace = random_trace(rng, max_instances=8, alphabet="ABCDEF")
            left = eval_query(trace, lhs).matched
            right = eval_query(trace, rhs).matched
            assert left == right, (
                f"{rule.name}: {format_query(lhs)} vs {format_query(rhs)}"
            )

    def test_singleton_any_instantiation_is_degenerate(self):
        # ANY{'A'} behaves like 'A' on the unary side.
        lhs = parse("ANY{'A'} isC =1")
        rhs = parse("'A' isC =1")
        rng = random.Random(3)
        for _ in range(50):
            trace = random_trace(rng, max_instances=6, alphabet="AB")
            assert eval_query(trace, lhs).matched == eval_query(trace, rhs).matched


class TestNonEquivalences:
    def test_three_pairs(self):
        witnesses = nonequivalence_witnesses()
        assert len(witnesses) == 3
        assert {w.name for w in witnesses} == {
            "right-any-plain",
            "right-any-card",
            "right-all-card",
        }

    @pytest.mark.parametrize("index", range(3))
    def test_pair_disagrees_on_witness_and_matches_oracle(self, index):
        w = nonequivalence_witnesses()[index]
        left = eval_query(w.witness, w.lhs).matched
        right = eval_query(w.witness, w.rhs).matched
        assert left != right, w.name
        assert left == oracle_eval_query(w.witness, w.lhs)
        assert right == oracle_eval_query(w.witness, w.rhs)

    def test_four_a_construction_fails_lhs_but_passes_or_form(self):
        w = next(
            x for x in nonequivalence_witnesses() if x.name == "right-any-card"
        )
        assert [a.label for a in w.witness.instances].count("A") == 4
        assert not eval_query(w.witness, w.lhs).matched
        assert eval_query(w.witness, w.rhs).matched

    def test_degenerate_singleton_sets_agree(self):
        lhs = parse("'A' isP ANY{'B'}")
        rhs = parse("'A' isP 'B'")
        rng = random.Random(17)
        for _ in range(50):
            trace = random_trace(rng, max_instances=6, alphabet="AB")
            assert eval_query(trace, lhs).matched == eval_query(trace, rhs).matched
