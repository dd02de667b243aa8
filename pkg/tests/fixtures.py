"""Shared fixtures: the credit-process example log and trace builders."""

from __future__ import annotations

import random

from poq.model import ActivityInstance, Trace, build_order

# A two-case credit process.  Case 1 interleaves document checks, two
# parallel information requests, a credit and a security-risk assessment
# running side by side, and two inspections completing at the same instant.
# Case 2 is a single received request.
CREDIT_LOG_CSV = """case,activity,start,complete
1,CRR,,2021-06-16T12:43:35Z
1,DC,2021-06-17T08:32:23Z,2021-06-18T12:01:11Z
1,RIP,2021-06-19T09:34:00Z,2021-06-22T09:12:00Z
1,RIT,2021-06-19T14:54:00Z,2021-06-25T08:57:12Z
1,DC,,2021-06-28T14:23:59Z
1,CA,2021-06-30T13:02:11Z,2021-07-04T08:11:32Z
1,SRA,2021-07-01T17:23:11Z,2021-07-06T18:51:43Z
1,PI,,2021-07-05T00:00:00Z
1,LTV,,2021-07-05T00:00:00Z
1,DM,,2021-07-08T14:13:18Z
2,CRR,,2021-06-17T23:21:31Z
"""

# Frozen via the edge-removal oracle over pairwise timestamp comparisons.
CASE1_REDUCTION = frozenset(
    {
        ("1", "2"),
        ("2", "3"),
        ("2", "4"),
        ("3", "5"),
        ("4", "5"),
        ("5", "6"),
        ("5", "7"),
        ("6", "8"),
        ("6", "9"),
        ("7", "10"),
        ("8", "10"),
        ("9", "10"),
    }
)

TREE_QUERY = (
    "(('DC' isC =2) OR (('DC' isC =1) AND ('CRR' isDF 'DC'))) "
    "AND (NOT('DC' isDF 'DM'))"
)


def mk_trace(*specs: tuple[str, int | None, int], case_id: str = "t") -> Trace:
    """Build a trace from (label, start, complete) triples; ids are positional."""
    return build_order(
        ActivityInstance(
            id=str(i + 1), case_id=case_id, label=label, start=start, complete=complete
        )
        for i, (label, start, complete) in enumerate(specs)
    )


def chain(*labels: str, case_id: str = "t") -> Trace:
    """A totally ordered trace visiting the labels in sequence."""
    return mk_trace(
        *(( label, i * 100, i * 100 + 50) for i, label in enumerate(labels)),
        case_id=case_id,
    )


def antichain(*labels: str, case_id: str = "t") -> Trace:
    """Mutually incomparable instances (identical completion times)."""
    return mk_trace(*((label, None, 100) for label in labels), case_id=case_id)


def random_trace(
    rng: random.Random,
    max_instances: int = 12,
    alphabet: str = "ABCDEF",
    case_id: str = "r",
) -> Trace:
    """Random trace with deliberate ties, missing starts, and overlaps."""
    n = rng.randint(1, max_instances)
    instances = []
    for i in range(n):
        complete = rng.randrange(0, 40) * 25
        start: int | None = None
        if rng.random() < 0.6:
            start = complete - rng.randrange(0, 8) * 25
        instances.append(
            ActivityInstance(
                id=str(i + 1),
                case_id=case_id,
                label=rng.choice(alphabet),
                start=start,
                complete=complete,
            )
        )
    return build_order(instances)
