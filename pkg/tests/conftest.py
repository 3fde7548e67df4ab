import random

import mpmath as mp
import pytest

import weierstrass_mock
from weierstrass_mock.curves import CURVE_11A1, CURVE_37A1, CURVE_361

CURVES = [CURVE_11A1, CURVE_37A1, CURVE_361]


@pytest.fixture(autouse=True)
def _working_precision():
    # every test starts from the package default and cannot leak a change
    with mp.workprec(weierstrass_mock.DEFAULT_PRECISION):
        yield


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(params=CURVES, ids=lambda E: E.label)
def curve(request):
    return request.param


_criteria_key = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_criteria_key] = {}


@pytest.fixture
def record_criterion(request):
    """Store a one-line verdict for the acceptance summary."""
    results = request.config.stash[_criteria_key]

    def record(k, passed, detail=""):
        line = f"CRITERION {k}: {'PASS' if passed else 'FAIL'}" + (f" ({detail})" if detail else "")
        results[k] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_criteria_key, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        terminalreporter.write_line(results[k])
