import random

import pytest
from hypothesis import given, strategies as st

from conftest import GF2, chain2, dual_numbers, engine, ex1, ex2, m2
from oracles import EX1_VERDICTS
from ringquot.algebra import LEFT, RIGHT, RingExtension, matrix_algebra, truncated_polynomial
from ringquot.battery import _diagonal, random_extension
from ringquot.perfectness import (
    check_elementwise,
    check_elementwise_symmetric,
    classical_quotient,
    is_flat,
    is_perfect_filter,
    is_regular,
    is_ring_epi,
    is_unit,
    ore_check,
    perfectness_report,
)
from ringquot.torsion import lambek_filter


def _collapse(F):
    """k[x]/x^2 -> k, x -> 0: surjective, hence epi, but k is not flat."""
    R, k = dual_numbers(F), truncated_polynomial(F, 1)
    return RingExtension(R, k, F.mat(1, 2, [1, 0])).validate()


@pytest.mark.parametrize("name", sorted(EX1_VERDICTS))
def test_ex1_verdicts(name):
    verdict, _tag = EX1_VERDICTS[name]
    rep = perfectness_report(engine("example_5_4_1").get(name).q)
    assert rep.verdict == verdict
    assert rep.routes_agree


def test_ex1_qmax_is_not_left_flat_on_the_wrong_side():
    # DERIVED: M3 is flat as a left R-module but not as a right one
    q = engine("example_5_4_1").get("qmax").q
    assert is_flat(q, LEFT).ok and not is_flat(q, RIGHT).ok


def test_diagonal_is_not_an_epimorphism(field):
    # TRIVIAL: (k x k) (x)_k (k x k) has dim 4
    rep = perfectness_report(_diagonal(truncated_polynomial(field, 1)))
    assert not rep.is_epi and rep.witnesses["tensor_dim"] == 4
    assert rep.verdict == "not_perfect" and rep.routes_agree


def test_surjection_is_epi_but_not_flat(field):
    ext = _collapse(field)
    assert is_ring_epi(ext).ok
    assert not is_flat(ext, LEFT).ok and not is_flat(ext, RIGHT).ok
    rep = perfectness_report(ext)
    assert rep.verdict == "not_perfect" and rep.routes_agree


def test_elementwise_names_the_failing_condition():
    res = check_elementwise(_collapse(GF2), RIGHT)
    assert not res.ok and res.cond_i and not res.cond_ii
    assert res.label == "exact"


def test_identity_is_perfect(field):
    for R in (ex1(field), m2(field)):
        rep = perfectness_report(RingExtension.identity(R))
        assert rep.verdict == "perfect_symmetric" and rep.label == "exact"


def test_chain2_into_m2_is_perfect():
    # DERIVED: M2 = e11 M2 + e22 M2 is projective over T2 on both sides
    rep = perfectness_report(engine("chain2_incidence").get("qmax").q)
    assert rep.verdict == "perfect_symmetric" and rep.routes_agree


def test_positive_verdict_over_qq_is_sampled():
    rep = perfectness_report(engine("chain2_incidence", "QQ").get("qmax").q, seed=3, samples=8)
    assert rep.verdict == "perfect_symmetric" and rep.label == "sampled"


def test_counterexample_found_by_sampling_is_exact():
    # k -> M4(k) on scalars is not an epimorphism; a witness settles it
    R = truncated_polynomial(GF2, 1)
    S = matrix_algebra(GF2, 4)
    res = check_elementwise_symmetric(RingExtension(R, S, S.one).validate(), seed=3, samples=8)
    assert not res.ok and res.label == "exact"


def test_elementwise_is_seed_deterministic():
    ext = engine("chain2_incidence", "QQ").get("qmax").q
    assert check_elementwise(ext, RIGHT, seed=5, samples=8) == check_elementwise(ext, RIGHT, seed=5, samples=8)


@pytest.mark.parametrize("side", [RIGHT, LEFT])
def test_lambek_filters_of_ex1_are_perfect(side):
    e = engine("example_5_4_1")
    Q = e.get("qmax" if side == RIGHT else "qlmax")
    rep = is_perfect_filter(lambek_filter(ex1(GF2), side), Q)
    assert rep.ok and rep.generates and rep.recovered


def test_ore_counts_regular_elements():
    # DERIVED: regular = unit = diagonal part all ones, radical free
    assert ore_check(ex1(GF2)).regular_count == 2 ** 2
    assert ore_check(ex2(GF2)).regular_count == 2 ** 5
    assert ore_check(chain2(GF2), LEFT).units_only


def test_regular_elements_are_units():
    R = ex1(GF2)
    for a in R.elements():
        assert is_regular(R, a) == is_unit(R, a)


@pytest.mark.parametrize("make", [dual_numbers, chain2, ex1])
def test_classical_quotient_is_r_and_symmetric_perfect(make, field):
    Q = classical_quotient(make(field))
    assert Q.equals_source
    sym = check_elementwise_symmetric(Q.q)
    assert sym.ok


@given(st.integers(0, 10_000))
def test_structural_and_elementwise_routes_agree(seed):
    ext, _ = random_extension(GF2, random.Random(seed), 6)
    rep = perfectness_report(ext, seed=seed)
    assert rep.routes_agree
    if rep.verdict == "perfect_symmetric":
        assert rep.perfect_right and rep.perfect_left
    assert rep.perfect_right == (rep.verdict in ("perfect_right", "perfect_symmetric"))
