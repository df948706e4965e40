import random

import pytest
from hypothesis import given, strategies as st

from conftest import GF2, engine
from oracles import DIMS
from ringquot.algebra import LEFT, RIGHT, RingExtension, truncated_polynomial
from ringquot.battery import _diagonal, random_extension
from ringquot.descent import certify_fixpoint, descend, s_prime, total_containments
from ringquot.errors import UsageError
from ringquot.perfectness import perfectness_report
from ringquot.torsion import SYMMETRIC

FIXTURES = ["example_5_4_1", "example_5_4_2", "m2", "dual_numbers", "chain2_incidence"]
TOTALS = {"qtot": RIGHT, "qltot": LEFT, "qsigmatot": SYMMETRIC}


@pytest.mark.parametrize("fixture", FIXTURES)
@pytest.mark.parametrize("name", sorted(TOTALS))
def test_fixture_traces(fixture, name):
    Q = engine(fixture).get(name)
    trace = Q.data["trace"]
    assert trace.mode == TOTALS[name]
    assert trace.strictly_decreasing
    assert trace.certificate["ok"]
    assert trace.dims[-1] == Q.dim
    if (fixture, name) in DIMS:
        assert Q.dim == DIMS[(fixture, name)][0]


@pytest.mark.parametrize("fixture", FIXTURES)
def test_symmetric_descents_agree(fixture):
    Q = engine(fixture).get("qsigmatot")
    assert Q.data["cross_trace"].dims[-1] == Q.dim


@pytest.mark.parametrize("fixture", ["example_5_4_1", "m2", "dual_numbers", "chain2_incidence"])
def test_total_containments(fixture):
    e = engine(fixture)
    rep = total_containments(e.R, e.get("qsigmatot"), e.get("qtot"), e.get("qltot"))
    assert rep.ok


def test_ex2_total_containments():
    e = engine("example_5_4_2")
    assert total_containments(e.R, e.get("qsigmatot"), e.get("qtot"), e.get("qltot")).ok


def test_diagonal_descends_to_source(field):
    R = truncated_polynomial(field, 1)
    for mode in (RIGHT, LEFT, SYMMETRIC):
        trace = descend(_diagonal(R), mode)
        assert trace.dims == [2, 1, 1]
        assert trace.fixpoint.dim == 1


def test_s_prime_rejects_unknown_mode():
    with pytest.raises(UsageError):
        s_prime(RingExtension.identity(truncated_polynomial(GF2, 2)), "sideways")


def test_s_prime_validated_against_exhaustive_membership():
    ext = _diagonal(truncated_polynomial(GF2, 2))
    for mode in (RIGHT, LEFT, SYMMETRIC):
        res = s_prime(ext, mode, validate=True)
        assert res.exhaustive_checked and res.space.contains_space(ext.image)


@given(st.integers(0, 10_000), st.sampled_from([RIGHT, LEFT, SYMMETRIC]))
def test_descent_invariants(seed, mode):
    ext, _ = random_extension(GF2, random.Random(seed), 6)
    trace = descend(ext, mode)
    assert trace.strictly_decreasing
    assert trace.certificate["ok"]
    assert trace.stages[-1].contains_space(ext.image)
    for big, small in zip(trace.stages, trace.stages[1:]):
        assert big.contains_space(small)
    # the fixpoint is already perfect, so descending again does nothing
    again = descend(trace.fixpoint_map, mode)
    assert again.dims == [trace.fixpoint.dim] * 2
    assert certify_fixpoint(trace.fixpoint_map, mode)["ok"]


@given(st.integers(0, 10_000))
def test_perfect_extensions_do_not_descend(seed):
    ext, _ = random_extension(GF2, random.Random(seed), 6)
    rep = perfectness_report(ext, seed=seed)
    assert (descend(ext, RIGHT).dims[-1] == ext.target.dim) == rep.perfect_right
    assert (descend(ext, LEFT).dims[-1] == ext.target.dim) == rep.perfect_left
