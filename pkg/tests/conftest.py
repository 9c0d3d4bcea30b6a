import random
import sys

import pytest

from kbhomology.catalog import NAMES, builtin
from kbhomology.diagram import parse_pd, random_braid

# right-handed trefoil, writhe +3
TREFOIL_PD = "PD[X(1,5,2,4), X(3,1,4,6), X(5,3,6,2)]"
CURL_PD = "PD[X(1,1,2,2)]"

SMALL_NAMES = [n for n in NAMES if n not in ("k10_132", "k10_132_framed0", "k5_1_framed0")]


def random_braids(count, max_crossings, seed, max_strands=4):
    rng = random.Random(seed)
    return [random_braid(rng, max_crossings, max_strands) for _ in range(count)]


@pytest.fixture
def trefoil():
    return parse_pd(TREFOIL_PD)


@pytest.fixture
def curl():
    return parse_pd(CURL_PD)


@pytest.fixture(params=SMALL_NAMES)
def small_catalog(request):
    return builtin(request.param)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results and not getattr(module, "STARTED", None):
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
    # a criterion that was selected but errored before reporting counts as a failure
    started = getattr(module, "STARTED", set())
    for number in sorted(started - set(results)):
        terminalreporter.write_line(f"criterion {number:>2}: FAIL  (did not complete)")
