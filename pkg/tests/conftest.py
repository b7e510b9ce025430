import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from curveproj.cli import load_document  # noqa: E402
from curveproj.detect import run_exact  # noqa: E402
from curveproj.parser import load_pair  # noqa: E402

FIXTURES = ("parabola", "exfin", "cone", "circles", "exfin_perturbed", "example2", "example2_printed")


@functools.lru_cache(maxsize=None)
def fixture_pair(name):
    return load_pair(load_document(name))


@functools.lru_cache(maxsize=None)
def exact_run(name):
    c1, c2 = fixture_pair(name)
    return run_exact(c1, c2)


@pytest.fixture
def pair():
    return fixture_pair


# criterion number -> "criterion N: PASS/FAIL ..." line, filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
