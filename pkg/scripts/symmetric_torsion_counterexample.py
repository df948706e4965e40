"""Two cases where  _S t(M) meet t_S(M)  is strictly smaller than  ker(M -> S (x) M (x) S).

1. R = T2 (upper triangular 2x2) inside S = M2, M = D(R) = Hom_k(R, k).
   S is projective over R on both sides, yet S (x) M and M (x) S are nonzero
   while S (x) M (x) S = 0.
2. R = k x k -> S = k, the first projection, M = e1 k e2.

Usage: python scripts/symmetric_torsion_counterexample.py [--field QQ]
"""
import argparse

from ringquot.algebra import LEFT, RIGHT, RingExtension, direct_product, truncated_polynomial
from ringquot.battery import symmetric_kernels
from ringquot.bimodules import BOTH, Bimodule, dual, one_sided, regular_bimodule
from ringquot.cli import Engine, Options, build_algebra, load_fixture
from ringquot.linalg import Field, kernel
from ringquot.perfectness import perfectness_report
from ringquot.torsion import i_map


def describe(title, M, ext):
    left = i_map(one_sided(M, LEFT), ext, LEFT)
    right = i_map(one_sided(M, RIGHT), ext, RIGHT)
    both = i_map(M, ext, BOTH)
    kl, kr, ks = kernel(left.map), kernel(right.map), kernel(both.map)
    print(title)
    print(f"  extension: {perfectness_report(ext).verdict}")
    print(f"  dim M = {M.dim}")
    print(f"  dim S(x)M = {left.target.dim}, dim M(x)S = {right.target.dim}, dim S(x)M(x)S = {both.target.dim}")
    print(f"  dim _S t = {kl.dim}, dim t_S = {kr.dim}, dim meet = {(kl & kr).dim}, dim ker i_M = {ks.dim}")
    for k, v in symmetric_kernels(M, ext).items():
        print(f"  {k}: {v}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--field", default="GF(2)")
    args = ap.parse_args()
    F = Field.parse(args.field)

    spec = load_fixture("chain2_incidence", F.name)
    eng = Engine(build_algebra(spec), Options())
    q = eng.get("qmax").q
    describe(f"T2 inside M2 over {F.name}, M = D(T2)", dual(regular_bimodule(eng.R)), q)

    k = truncated_polynomial(F, 1)
    R = direct_product(k, k)
    proj = RingExtension(R, k, F.mat(1, 2, [1, 0])).validate()
    one, zero = F.mat(1, 1, [1]), F.mat(1, 1, [0])
    describe(f"k x k -> k over {F.name}, M = e1 k e2", Bimodule(R, R, 1, (one, zero), (zero, one), name="e1ke2"), proj)


if __name__ == "__main__":
    main()
