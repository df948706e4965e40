import functools
import re
import sys

import hypothesis
import pytest

from ringquot.algebra import (
    PosetDesc,
    incidence_algebra,
    matrix_algebra,
    matrix_pattern_algebra,
    truncated_polynomial,
)
from ringquot.linalg import Field

hypothesis.settings.register_profile("ci", max_examples=40, deadline=None, derandomize=True, print_blob=True)
hypothesis.settings.register_profile("deep", max_examples=400, deadline=None)
hypothesis.settings.load_profile("ci")

GF2 = Field(2)
GF3 = Field(3)
QQ = Field(None)

EX1_CELLS = ((1, 1), (1, 3), (2, 2), (2, 3), (3, 3))
EX1_TIES = (((1, 1), (2, 2)),)
EX2_CELLS = ((1, 1), (1, 2), (1, 3), (1, 4), (2, 2), (2, 4), (3, 3), (3, 4), (4, 4))


@functools.lru_cache(maxsize=None)
def ex1(F):
    return matrix_pattern_algebra(F, 3, EX1_CELLS, EX1_TIES)[0]


@functools.lru_cache(maxsize=None)
def ex2(F):
    return matrix_pattern_algebra(F, 4, EX2_CELLS)[0]


@functools.lru_cache(maxsize=None)
def m2(F):
    return matrix_algebra(F, 2)


@functools.lru_cache(maxsize=None)
def dual_numbers(F):
    return truncated_polynomial(F, 2)


@functools.lru_cache(maxsize=None)
def chain2(F):
    return incidence_algebra(F, PosetDesc(("x", "y"), (("x", "y"),)))


@functools.lru_cache(maxsize=None)
def engine(fixture: str, field: str = "GF(2)"):
    """Shared construction cache per (fixture, field); the 9-dim example is slow to rebuild."""
    from ringquot.cli import Engine, build_algebra, load_fixture

    spec = load_fixture(fixture, field)
    return Engine(build_algebra(spec), spec.options)


@pytest.fixture(params=[GF2, QQ], ids=["GF2", "QQ"])
def field(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")

    def order(key):
        m = re.match(r"(\d+)(.*)", key)
        return int(m.group(1)), m.group(2)
    for key in sorted(results, key=order):
        ok, detail = results[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {key}: {detail}")
