import json
import os
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from hmsched.core import identical
from hmsched.reductions import BalancedBinPackingInstance, BinPackingInstance

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=500,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def tiny():
    return identical((3, 5), (2, 1), 2)


@pytest.fixture
def bbp0():
    return BalancedBinPackingInstance((1, 1, 2, 2), 2, 3)


@pytest.fixture
def bbp1():
    return BalancedBinPackingInstance((1, 1, 1, 3), 2, 3)


@pytest.fixture
def bp0():
    return BinPackingInstance((1, 2, 3), 2, 3)


@pytest.fixture(scope="session")
def golden():
    with open(GOLDEN / "bbp0.json") as fh:
        data = json.load(fh)
    data["q_cmax"]["speeds"] = [Fraction(s) for s in data["q_cmax"]["speeds"]]
    data["q_l2"]["target"] = Fraction(data["q_l2"]["target"])
    return data


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
