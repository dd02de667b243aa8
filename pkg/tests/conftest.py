import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fixtures import CREDIT_LOG_CSV

from poq.ingest import ingest_csv


@pytest.fixture(scope="session")
def credit_log():
    return ingest_csv(CREDIT_LOG_CSV, log_id="credit")


@pytest.fixture(scope="session")
def case1(credit_log):
    return credit_log.by_case["1"]


@pytest.fixture(scope="session")
def case2(credit_log):
    return credit_log.by_case["2"]
