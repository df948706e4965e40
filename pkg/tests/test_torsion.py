import random

import pytest
from hypothesis import given, strategies as st

from conftest import GF2, QQ, chain2, dual_numbers, ex1, ex2, m2
from ringquot.algebra import LEFT, RIGHT, Ideal, RingExtension
from ringquot.battery import random_bimodule, random_extension
from ringquot.bimodules import ideals, one_sided, quotient_module, regular_bimodule
from ringquot.errors import UsageError
from ringquot.linalg import Subspace
from ringquot.torsion import (
    SYMMETRIC,
    FilterHandle,
    filter_axioms_check,
    handle_from_ideal,
    i_map,
    improper_filter,
    is_dense,
    lambek_filter,
    minimal_dense_ideal,
    minimal_dense_ideal_certified,
    symmetric_member_by_extension,
    tensoring_filter_min,
    torsion_submodule,
    torsion_subspace,
    trivial_filter,
)


def _span(R, labels):
    return Subspace.span(R.field, R.dim, [R.basis(R.labels.index(x)) for x in labels])


def test_ex1_dense_ideals(field):
    # DERIVED: the socle of R_R lives at the E33 class; D_r is column 3, D_l is R e R for e = E11+E22
    R = ex1(field)
    assert minimal_dense_ideal(R, RIGHT).space == _span(R, ["E13", "E23", "E33"])
    assert minimal_dense_ideal(R, LEFT).space == _span(R, ["E11+E22", "E13", "E23"])


def test_ex2_dense_ideals():
    # DERIVED: column 4 on the right, row 1 on the left
    R = ex2(GF2)
    assert minimal_dense_ideal(R, RIGHT).space == _span(R, ["E14", "E24", "E34", "E44"])
    assert minimal_dense_ideal(R, LEFT).space == _span(R, ["E11", "E12", "E13", "E14"])


def test_semisimple_and_self_injective_rings_have_no_proper_dense_ideal(field):
    # TRIVIAL for M2; DERIVED for k[x]/x^2: R/xR is the socle simple, so xR is not dense
    for R in (m2(field), dual_numbers(field)):
        assert minimal_dense_ideal(R, RIGHT).dim == R.dim


def test_dense_certificate_cross_checks_over_gf2():
    res = minimal_dense_ideal_certified(ex1(GF2), RIGHT)
    assert "descent" in res.certificate


@pytest.mark.parametrize("make", [chain2, ex1, dual_numbers])
@pytest.mark.parametrize("side", [LEFT, RIGHT])
def test_dense_iff_contains_least_dense(make, side):
    # DERIVED: exhaustive over every one-sided ideal of the GF(2) algebra
    R = make(GF2)
    D = minimal_dense_ideal(R, side)
    for I in ideals(R, side):
        assert is_dense(I, side) == I.space.contains_space(D.space)


@pytest.mark.parametrize("side", [LEFT, RIGHT, SYMMETRIC])
def test_lambek_filters_satisfy_axioms(field, side):
    for R in (ex1(field), chain2(field), dual_numbers(field)):
        assert filter_axioms_check(lambek_filter(R, side)).ok


def test_axioms_reject_nonidempotent_ideal():
    R = dual_numbers(GF2)
    J = R.radical
    rep = filter_axioms_check(handle_from_ideal(J, RIGHT))
    assert not rep.ok and "composition" in rep.witness


def test_axioms_reject_one_sided_ideal():
    R = chain2(GF2)
    I = Ideal(R, RIGHT, _span(R, ["(y,y)"]))  # a right ideal; (x,y)(y,y) escapes it
    rep = filter_axioms_check(handle_from_ideal(I, RIGHT))
    assert not rep.ok and "colon" in rep.witness


def test_handle_validation():
    R = m2(GF2)
    with pytest.raises(UsageError):
        FilterHandle(R, RIGHT)
    with pytest.raises(UsageError):
        FilterHandle(R, SYMMETRIC, min_left=Ideal.whole(R))


def test_improper_and_trivial_filters(field):
    R = ex1(field)
    M = one_sided(regular_bimodule(R), RIGHT)
    assert torsion_subspace(M, improper_filter(R)).dim == 0
    assert torsion_subspace(M, trivial_filter(R)).dim == M.dim


def test_regular_module_is_lambek_torsion_free(field):
    R = ex1(field)
    rep = torsion_submodule(one_sided(regular_bimodule(R), RIGHT), lambek_filter(R, RIGHT))
    assert rep.is_torsion_free


def test_quotient_by_dense_ideal_is_torsion(field):
    R = ex1(field)
    h = lambek_filter(R, RIGHT)
    M = one_sided(regular_bimodule(R), RIGHT)
    Q, _ = quotient_module(M, h.min_ideal.space)
    assert torsion_submodule(Q, h).is_torsion


@given(st.integers(0, 10_000))
def test_torsion_is_idempotent(seed):
    """t(M / t(M)) = 0 for the Lambek filter."""
    rng = random.Random(seed)
    ext, _ = random_extension(GF2, rng, 6)
    R = ext.source
    M, _ = random_bimodule(R, rng, ext, 6)
    for side in (RIGHT, LEFT):
        h = lambek_filter(R, side)
        Ms = one_sided(M, side)
        t = torsion_subspace(Ms, h)
        assert Ms.is_closed(t, side)
        Q, _ = quotient_module(Ms, t)
        assert torsion_subspace(Q, h).dim == 0


def test_identity_extension_has_no_tensoring_kernel(field):
    R = ex1(field)
    ext = RingExtension.identity(R)
    M = regular_bimodule(R)
    for side in (RIGHT, LEFT, SYMMETRIC):
        Mside = M if side == SYMMETRIC else one_sided(M, side)
        assert Subspace.column_space(i_map(Mside, ext, side).map).dim == M.dim


def test_tensoring_filter_min_identity_is_whole_ring(field):
    R = chain2(field)
    ext = RingExtension.identity(R)
    for side in (RIGHT, LEFT, SYMMETRIC):
        assert tensoring_filter_min(ext, side).dim == R.dim


def test_symmetric_member_by_extension(field):
    R = ex1(field)
    ext = RingExtension.identity(R)
    assert symmetric_member_by_extension(Ideal.whole(R), ext)
    assert not symmetric_member_by_extension(R.radical, ext)


def test_torsion_kernel_is_submodule_qq():
    R = ex1(QQ)
    h = lambek_filter(R, SYMMETRIC)
    M = regular_bimodule(R)
    Q, _ = quotient_module(M, R.radical.space)
    rep = torsion_submodule(Q, h)
    assert Q.is_closed(rep.torsion_sub)
