import random

from hypothesis import given, strategies as st

from conftest import GF2, engine
from ringquot.algebra import RingExtension, direct_product, truncated_polynomial
from ringquot.battery import (
    BatteryConfig,
    check_case,
    five_term_left,
    five_term_right,
    random_bimodule,
    random_extension,
    run_battery,
    symmetric_kernels,
    triple_tensor_torsion_free,
)
from ringquot.bimodules import Bimodule, dual, regular_bimodule

# the one check that is not an identity; see test_meet_is_not_the_kernel_*
NOT_A_THEOREM = "sym.meet_is_kernel"


def _real_failures(case):
    return [k for k in case.failures if k != NOT_A_THEOREM]


def test_small_battery_is_clean_and_deterministic():
    cfg = BatteryConfig(seed=11, count=20)
    a, b = run_battery(cfg), run_battery(cfg)
    assert [(c.extension, c.module, c.checks) for c in a.cases] == \
           [(c.extension, c.module, c.checks) for c in b.cases]
    assert len(a.cases) == 20
    assert all(not _real_failures(c) for c in a.cases)


def test_battery_covers_flat_and_proper_cases():
    cov = run_battery(BatteryConfig(seed=3, count=30)).coverage()
    assert cov["cases"] == 30
    assert cov["both_flat"] > 0 and cov["proper"] > 0


def test_checks_respect_flatness_gates():
    res = run_battery(BatteryConfig(seed=5, count=15))
    for c in res.cases:
        if not c.left_flat:
            assert not any(k.startswith("right.") for k in c.checks)
        if not (c.left_flat and c.right_flat):
            assert not any(k.startswith(("sym.", "triple.")) for k in c.checks)


@given(st.integers(0, 10_000))
def test_random_case_identities(seed):
    rng = random.Random(seed)
    ext, ed = random_extension(GF2, rng, 6)
    M, md = random_bimodule(ext.source, rng, ext, 6)
    case = check_case(seed, ext, M, ed, md)
    assert not _real_failures(case), case.failures


def test_meet_is_not_the_kernel_for_flat_inclusion():
    # DERIVED by hand: T2 inside M2, M = D(T2); S(x)M and M(x)S are 2-dim, S(x)M(x)S = 0
    e = engine("chain2_incidence")
    q = e.get("qmax").q
    M = dual(regular_bimodule(e.R))
    sym = symmetric_kernels(M, q)
    assert sym["kernel_is_torsion"] and sym["meet_inside_kernel"]
    assert not sym["meet_is_kernel"]
    assert five_term_right(M, q)["exact_middle"] and five_term_left(M, q)["exact_middle"]


def test_meet_is_not_the_kernel_for_projection():
    # DERIVED by hand: R = k x k -> k first projection, M = e1 k e2
    k = truncated_polynomial(GF2, 1)
    R = direct_product(k, k)
    ext = RingExtension(R, k, GF2.mat(1, 2, [1, 0])).validate()
    one, zero = GF2.mat(1, 1, [1]), GF2.mat(1, 1, [0])
    M = Bimodule(R, R, 1, (one, zero), (zero, one), name="e1ke2")
    sym = symmetric_kernels(M, ext)
    assert sym["kernel_is_torsion"] and not sym["meet_is_kernel"]
    assert triple_tensor_torsion_free(M, ext)["filter_torsion_zero"]
