import random

from hypothesis import given, strategies as st

from conftest import GF2, QQ, chain2, dual_numbers, ex1, m2
from oracles import EX1_HULL_DIM
from ringquot.algebra import LEFT, RIGHT
from ringquot.battery import random_bimodule, random_extension
from ringquot.bimodules import (
    BOTH,
    dual,
    hom_space,
    is_essential,
    one_sided,
    projective_cover,
    quotient_module,
    regular_bimodule,
    socle,
    sub_bimodule_generated,
    submodule,
    tensor_over,
    unvec,
    vec,
)
from ringquot.linalg import Subspace
from ringquot.torsion import injective_hull_of_ring


def test_vec_unvec_roundtrip(field):
    X = field.mat(2, 3, [1, 2, 0, -1, 1, 1])
    assert unvec(field, vec(X), 2, 3) == X


def test_regular_actions_commute(field):
    M = regular_bimodule(ex1(field))
    for A in M.lact:
        for B in M.ract:
            assert A * B == B * A


def test_end_of_right_regular_is_left_multiplication(field):
    # TRIVIAL: End(R_R) = R acting on the left
    for R in (ex1(field), m2(field), chain2(field)):
        H = hom_space(one_sided(regular_bimodule(R), RIGHT), one_sided(regular_bimodule(R), RIGHT), RIGHT)
        assert H.dim == R.dim


def test_center_is_bimodule_endomorphisms(field):
    for R in (ex1(field), m2(field), dual_numbers(field)):
        M = regular_bimodule(R)
        assert hom_space(M, M, BOTH).dim == R.center.dim


def test_tensor_with_regular_is_identity(field):
    R = ex1(field)
    M = regular_bimodule(R)
    assert tensor_over(M, M).dim == R.dim


def test_tensor_of_top_over_local_ring(field):
    # DERIVED: k (x)_R k = k and k (x)_R J = k since J = xR is a copy of k
    R = dual_numbers(field)
    reg = regular_bimodule(R)
    J = R.radical.space
    top, _ = quotient_module(reg, J)
    rad, _ = submodule(reg, J)
    assert tensor_over(top, top).dim == 1
    assert tensor_over(top, rad).dim == 1
    assert tensor_over(reg, top).dim == 1


def test_ex1_injective_hull_dim():
    dim, tag = EX1_HULL_DIM
    E, emb = injective_hull_of_ring(ex1(GF2), RIGHT)
    assert E.dim == dim
    assert is_essential(E, Subspace.column_space(emb.matrix))


def test_injective_hull_qq_matches_gf2():
    assert injective_hull_of_ring(ex1(QQ), RIGHT)[0].dim == EX1_HULL_DIM[0]


def test_projective_cover_surjects(field):
    R = chain2(field)
    M = one_sided(regular_bimodule(R), RIGHT)
    U = sub_bimodule_generated(M, [R.basis(1)], RIGHT)
    Q, _ = quotient_module(M, U)
    P, pi = projective_cover(Q)
    assert Subspace.column_space(pi.matrix).dim == Q.dim
    assert P.dim >= Q.dim


def test_socle_of_self_injective_local_is_simple():
    R = dual_numbers(GF2)
    M = one_sided(regular_bimodule(R), RIGHT)
    assert socle(M).dim == 1


def test_dual_is_involutive(field):
    M = regular_bimodule(ex1(field))
    DD = dual(dual(M))
    assert DD.dim == M.dim
    assert all(a == b for a, b in zip(DD.lact, M.lact))
    assert all(a == b for a, b in zip(DD.ract, M.ract))


@given(st.integers(0, 10_000))
def test_random_sub_and_quotient_are_bimodules(seed):
    rng = random.Random(seed)
    ext, _ = random_extension(GF2, rng, 6)
    M, _ = random_bimodule(ext.source, rng, ext, 6)
    v = M.field.mat(M.dim, 1, [rng.randrange(2) for _ in range(M.dim)])
    U = sub_bimodule_generated(M, [v], BOTH)
    assert M.is_closed(U)
    if U.dim:
        S, inc = submodule(M, U)
        assert S.dim == U.dim
    Q, proj = quotient_module(M, U)
    assert Q.dim == M.dim - U.dim
    for A, B in zip(M.lact, Q.lact):
        assert proj * A == B * proj


@given(st.integers(0, 10_000))
def test_tensor_dimension_is_balanced(seed):
    """dim(M (x)_R R) = dim M and dim(R (x)_R M) = dim M."""
    rng = random.Random(seed)
    ext, _ = random_extension(GF2, rng, 6)
    R = ext.source
    M, _ = random_bimodule(R, rng, ext, 6)
    reg = regular_bimodule(R)
    assert tensor_over(M, reg).dim == M.dim
    assert tensor_over(reg, M).dim == M.dim


def test_hom_sides_are_consistent(field):
    R = ex1(field)
    M = regular_bimodule(R)
    both = hom_space(M, M, BOTH)
    left = hom_space(one_sided(M, LEFT), one_sided(M, LEFT), LEFT)
    right = hom_space(one_sided(M, RIGHT), one_sided(M, RIGHT), RIGHT)
    assert (left & right) == both
