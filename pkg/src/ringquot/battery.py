"""Seeded random extensions and bimodules, and the tensoring-torsion checks run on them.

For an injective R -> S and an R-bimodule M the battery checks

* left flat S:  ker(M -> M (x) S) is the torsion of the least ideal K_r with
  f(K_r) S = S, and 0 -> t(M) -> M -> M (x) S -> M (x) S/f(R) -> 0 is exact
  (the mirror statement for right flat S as well);
* flat on both sides:  the two-sided torsion, the intersection of the
  one-sided kernels and ker(M -> S (x) M (x) S) coincide, and
  S (x) M (x) S has injective i-map.

The middle identity is not a theorem: for T2 inside M2 and M the dual of T2,
S (x) M (x) S = 0 while both one-sided tensors are 2-dimensional, so
``meet_is_kernel`` fails there (see ``scripts/symmetric_torsion_counterexample.py``).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .algebra import (
    LEFT,
    RIGHT,
    Algebra,
    PosetDesc,
    QuiverDesc,
    RingExtension,
    direct_product,
    incidence_algebra,
    matrix_algebra,
    matrix_pattern_algebra,
    path_algebra,
    truncated_polynomial,
)
from .bimodules import (
    BOTH,
    Bimodule,
    dual,
    extension_bimodule,
    one_sided,
    quotient_module,
    regular_bimodule,
    restrict,
    sub_bimodule_generated,
    submodule,
    tensor_map,
    tensor_over,
)
from .linalg import Field, Subspace, hstack, kernel, rank
from .perfectness import is_flat
from .torsion import handle_from_ideal, i_map, induced_symmetric_filter, tensoring_filter_min, torsion_subspace


@dataclass(frozen=True)
class BatteryConfig:
    seed: int = 0
    count: int = 200
    max_dim: int = 6
    modules_per_extension: int = 2
    field: str = "GF(2)"


# ---------------------------------------------------------------------------
# random objects


def _random_vector(F: Field, n: int, rng: random.Random):
    p = F.p or 3
    return F.mat(n, 1, [rng.randrange(p) - (1 if F.p is None else 0) for _ in range(n)])


def _closure(S: Algebra, U: Subspace) -> Subspace:
    while True:
        V = U + S.span_products(U, U)
        if V.dim == U.dim:
            return U
        U = V


def random_subalgebra(S: Algebra, rng: random.Random, gens: int | None = None) -> Subspace:
    """Unital subalgebra generated by a few random elements."""
    k = rng.randint(0, 3) if gens is None else gens
    U = Subspace.span(S.field, S.dim, [S.unit] + [_random_vector(S.field, S.dim, rng) for _ in range(k)])
    return _closure(S, U)


def _random_poset(rng: random.Random, n: int) -> PosetDesc:
    names = [f"p{i}" for i in range(n)]
    rels = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5]
    # transitive closure keeps the incidence algebra well defined
    closed = set(rels)
    changed = True
    while changed:
        changed = False
        for a, b in list(closed):
            for c, d in list(closed):
                if b == c and (a, d) not in closed:
                    closed.add((a, d))
                    changed = True
    return PosetDesc(tuple(names), tuple(sorted(closed)))


def random_ambient(F: Field, rng: random.Random, max_dim: int,
                   diagonal: bool = True) -> tuple[Algebra | None, str]:
    """A small algebra S drawn from several families; None asks for a diagonal embedding."""
    kinds = ["truncated"]
    if max_dim >= 3:
        kinds += ["poset", "product"]
    if max_dim >= 4:
        kinds += ["matrix", "pattern", "kronecker"]
    if diagonal:
        kinds.append("diagonal")
    while True:
        kind = rng.choice(kinds)
        if kind == "matrix":
            S, d = matrix_algebra(F, 2), "M2"
        elif kind == "truncated":
            m = rng.randint(1, min(4, max_dim))
            S, d = truncated_polynomial(F, m), f"k[x]/x^{m}"
        elif kind == "poset":
            n = rng.randint(2, 3)
            P = _random_poset(rng, n)
            S, d = incidence_algebra(F, P), f"incidence{len(P.relations)}rel{n}"
        elif kind == "pattern":
            cells = [(1, 1), (2, 2), (3, 3)] + [c for c in ((1, 2), (1, 3), (2, 3)) if rng.random() < 0.6]
            if (1, 2) in cells and (2, 3) in cells and (1, 3) not in cells:
                cells.append((1, 3))
            ties = [((1, 1), (2, 2))] if rng.random() < 0.5 else []
            S, _ = matrix_pattern_algebra(F, 3, cells, ties)
            d = f"pattern{len(cells)}" + ("tied" if ties else "")
        elif kind == "kronecker":
            S, d = path_algebra(F, QuiverDesc(("1", "2"), (("a", "1", "2"), ("b", "1", "2")))), "kronecker"
        elif kind == "product":
            b = truncated_polynomial(F, rng.randint(1, 2))
            a, _ = random_ambient(F, rng, max_dim - b.dim, diagonal=False)
            S, d = direct_product(a, b), f"product{a.dim}x{b.dim}"
        else:
            S, d = None, "diagonal"
        if S is None or S.dim <= max_dim:
            return S, d


def _diagonal(R: Algebra) -> RingExtension:
    """r -> (r, r) into R x R; free of rank 2 on both sides."""
    P = direct_product(R, R)
    F = R.field
    M = F.mat(2 * R.dim, R.dim)
    for i in range(R.dim):
        M[i, i] = F.one
        M[R.dim + i, i] = F.one
    return RingExtension(R, P, M).validate(injective=True)


def random_extension(F: Field, rng: random.Random, max_dim: int) -> tuple[RingExtension, str]:
    S, d = random_ambient(F, rng, max_dim)
    if S is None:
        R, rd = random_ambient(F, rng, max_dim // 2, diagonal=False)
        return _diagonal(R), f"diag({rd})"
    U = random_subalgebra(S, rng)
    R, inc = S.subalgebra(U, name="R")
    return inc, f"sub{U.dim}({d})"


def random_bimodule(R: Algebra, rng: random.Random, ext: RingExtension, max_dim: int) -> tuple[Bimodule, str]:
    """Small R-bimodule: regular, sub, quotient, restricted from S, or a dual of these."""
    F = R.field
    for _ in range(20):
        kind = rng.choice(["regular", "sub", "quotient", "restricted", "restricted_quotient"])
        if kind in ("restricted", "restricted_quotient"):
            base = extension_bimodule(ext)
        else:
            base = regular_bimodule(R)
        M, d = base, kind
        if kind in ("sub", "quotient", "restricted_quotient"):
            U = sub_bimodule_generated(base, [_random_vector(F, base.dim, rng)], BOTH)
            if kind == "sub":
                if U.dim == 0:
                    continue
                M, _ = submodule(base, U)
            else:
                if U.dim == base.dim:
                    continue
                M, _ = quotient_module(base, U)
            d = f"{kind}{M.dim}"
        if rng.random() < 0.3:
            M, d = dual(M), f"D({d})"
        if 0 < M.dim <= max_dim:
            return M, d
    return regular_bimodule(R), "regular"


# ---------------------------------------------------------------------------
# checks


@dataclass
class CaseResult:
    index: int
    extension: str
    module: str
    dims: tuple  # (dim R, dim S, dim M)
    left_flat: bool
    right_flat: bool
    checks: dict = dc_field(default_factory=dict)

    @property
    def failures(self) -> list[str]:
        return [k for k, v in self.checks.items() if v is False]


def _quotient_by_image(ext: RingExtension) -> tuple[Bimodule, Bimodule, object]:
    """S and S/f(R) as R-bimodules, with the projection."""
    SR = extension_bimodule(ext)
    Q, proj = quotient_module(SR, ext.image)
    return SR, Q, proj


def five_term_right(M: Bimodule, ext: RingExtension) -> dict:
    """0 -> t(M) -> M -> M (x) S -> M (x) S/f(R) -> 0 for the right module M, S left flat."""
    F = M.field
    Mr = one_sided(M, RIGHT)
    SR, Q, proj = _quotient_by_image(ext)
    Sleft = one_sided(SR, LEFT)
    Qleft = one_sided(Q, LEFT)
    T1 = tensor_over(Mr, Sleft)
    T2 = tensor_over(Mr, Qleft)
    i = i_map(Mr, ext, RIGHT).map
    g = tensor_map(T1, T2, F.eye(M.dim), proj)
    K = tensoring_filter_min(ext, RIGHT)
    out = {"filter_exists": K is not None}
    if K is not None:
        t = torsion_subspace(Mr, handle_from_ideal(K, RIGHT))
        out["kernel_is_torsion"] = kernel(i) == t
    else:
        t = kernel(i)
    out["i_dims_agree"] = T1.dim == i.nrows()
    out["composite_zero"] = all(x == 0 for x in (g * i).entries())
    out["exact_middle"] = kernel(g) == Subspace.column_space(i)
    out["surjective_end"] = rank(g) == T2.dim
    out["euler"] = t.dim - M.dim + T1.dim - T2.dim == 0
    return out


def five_term_left(M: Bimodule, ext: RingExtension) -> dict:
    """Mirror: 0 -> t(M) -> M -> S (x) M -> S/f(R) (x) M -> 0, S right flat."""
    F = M.field
    Ml = one_sided(M, LEFT)
    SR, Q, proj = _quotient_by_image(ext)
    T1 = tensor_over(one_sided(SR, RIGHT), Ml)
    T2 = tensor_over(one_sided(Q, RIGHT), Ml)
    i = i_map(Ml, ext, LEFT).map
    g = tensor_map(T1, T2, proj, F.eye(M.dim))
    K = tensoring_filter_min(ext, LEFT)
    out = {"filter_exists": K is not None}
    if K is not None:
        t = torsion_subspace(Ml, handle_from_ideal(K, LEFT))
        out["kernel_is_torsion"] = kernel(i) == t
    else:
        t = kernel(i)
    out["composite_zero"] = all(x == 0 for x in (g * i).entries())
    out["exact_middle"] = kernel(g) == Subspace.column_space(i)
    out["surjective_end"] = rank(g) == T2.dim
    out["euler"] = t.dim - M.dim + T1.dim - T2.dim == 0
    return out


def symmetric_kernels(M: Bimodule, ext: RingExtension) -> dict:
    """Two-sided torsion = left kernel meet right kernel = ker(M -> S (x) M (x) S).

    The two-sided torsion is the largest sub-bimodule N with S (x) N (x) S = 0;
    under flatness it contains every such N inside ker i_M, so it equals
    ker i_M exactly when S (x) ker(i_M) (x) S vanishes.
    """
    Kl = tensoring_filter_min(ext, LEFT)
    Kr = tensoring_filter_min(ext, RIGHT)
    kl = kernel(i_map(one_sided(M, LEFT), ext, LEFT).map)
    kr = kernel(i_map(one_sided(M, RIGHT), ext, RIGHT).map)
    ks = kernel(i_map(M, ext, BOTH).map)
    out = {"filters_exist": Kl is not None and Kr is not None}
    if Kl is not None and Kr is not None:
        h = induced_symmetric_filter(handle_from_ideal(Kl, LEFT), handle_from_ideal(Kr, RIGHT))
        out["filter_torsion_is_meet"] = torsion_subspace(M, h) == (kl & kr)
    out["meet_inside_kernel"] = ks.contains_space(kl & kr)
    N, _ = submodule(M, ks) if ks.dim else (None, None)
    out["kernel_is_torsion"] = N is None or i_map(N, ext, BOTH).target.dim == 0
    out["meet_is_kernel"] = (kl & kr) == ks
    return out


#: the literal kernel of S (x) N (x) S runs while dim S^2 * dim N stays below this
TRIPLE_CAP = 600


def triple_tensor_torsion_free(M: Bimodule, ext: RingExtension) -> dict:
    """S (x) M (x) S, restricted to R, has zero two-sided torsion and injective i-map."""
    td = i_map(M, ext, BOTH)
    N = restrict(td.target, ext, ext)
    out = {}
    Kl, Kr = tensoring_filter_min(ext, LEFT), tensoring_filter_min(ext, RIGHT)
    if Kl is not None and Kr is not None:
        h = induced_symmetric_filter(handle_from_ideal(Kl, LEFT), handle_from_ideal(Kr, RIGHT))
        out["filter_torsion_zero"] = torsion_subspace(N, h).dim == 0
    if N.dim and ext.target.dim ** 2 * N.dim <= TRIPLE_CAP:
        out["i_map_injective"] = kernel(i_map(N, ext, BOTH).map).dim == 0
    return out


def check_case(index: int, ext: RingExtension, M: Bimodule, ext_desc: str, mod_desc: str) -> CaseResult:
    lf = is_flat(ext, LEFT).ok
    rf = is_flat(ext, RIGHT).ok
    res = CaseResult(index, ext_desc, mod_desc, (ext.source.dim, ext.target.dim, M.dim), lf, rf)
    if lf:
        res.checks.update({f"right.{k}": v for k, v in five_term_right(M, ext).items()})
    if rf:
        res.checks.update({f"left.{k}": v for k, v in five_term_left(M, ext).items()})
    if lf and rf:
        res.checks.update({f"sym.{k}": v for k, v in symmetric_kernels(M, ext).items()})
        res.checks.update({f"triple.{k}": v for k, v in triple_tensor_torsion_free(M, ext).items()})
    return res


@dataclass
class BatteryResult:
    config: BatteryConfig
    cases: list

    @property
    def failures(self) -> list[CaseResult]:
        return [c for c in self.cases if c.failures]

    def coverage(self) -> dict:
        """How many cases exercised each hypothesis."""
        return {
            "cases": len(self.cases),
            "left_flat": sum(c.left_flat for c in self.cases),
            "right_flat": sum(c.right_flat for c in self.cases),
            "both_flat": sum(c.left_flat and c.right_flat for c in self.cases),
            "proper": sum(c.dims[0] < c.dims[1] for c in self.cases),
        }


def run_battery(cfg: BatteryConfig = BatteryConfig()) -> BatteryResult:
    F = Field.parse(cfg.field)
    rng = random.Random(cfg.seed)
    cases = []
    while len(cases) < cfg.count:
        ext, ed = random_extension(F, rng, cfg.max_dim)
        for _ in range(cfg.modules_per_extension):
            if len(cases) >= cfg.count:
                break
            M, md = random_bimodule(ext.source, rng, ext, cfg.max_dim)
            cases.append(check_case(len(cases), ext, M, ed, md))
    return BatteryResult(cfg, cases)


# ---------------------------------------------------------------------------
# fixture extensions


def _through(ambient: RingExtension, U: Subspace) -> RingExtension:
    """R -> U for a subalgebra U of the target containing the image."""
    R = ambient.source
    _, inc = ambient.target.subalgebra(U)
    cols = [U.coords(ambient(R.basis(i))) for i in range(R.dim)]
    return RingExtension(R, inc.source, hstack(R.field, cols, rows=U.dim)).validate()


def fixture_extensions(field: str = "GF(2)", max_target: int = 9) -> list[tuple[str, RingExtension]]:
    """R -> Q for every bundled fixture and construction with dim Q <= max_target,
    the identity, every intermediate descent stage, and the rings between R and
    Q_max generated by the image and one basis element."""
    from .cli import FIXTURE_NAMES, QUOTIENT_TASKS, Engine, build_algebra, load_fixture

    out = []
    for fx in FIXTURE_NAMES:
        spec = load_fixture(fx, field)
        R = build_algebra(spec)
        eng = Engine(R, spec.options)
        out.append((f"{fx}:identity", RingExtension.identity(R)))
        seen = set()
        for name in QUOTIENT_TASKS:
            Q = eng.get(name)
            if Q.dim <= max_target:
                out.append((f"{fx}:{name}", Q.q))
            tr = Q.data.get("trace")
            if tr is None:
                continue
            amb = tr.ambient
            for k, U in enumerate(tr.stages[1:-1], start=1):
                key = (name, U.dim)
                if U.dim <= max_target and U.dim < amb.target.dim and key not in seen:
                    seen.add(key)
                    out.append((f"{fx}:{name}:stage{k}", _through(amb, U)))
        for name in ("qmax", "qlmax"):
            Q = eng.get(name)
            S = Q.ring
            spaces = set()
            for j in range(S.dim):
                U = _closure(S, Q.image + Subspace.span(S.field, S.dim, [S.basis(j)]))
                if Q.image.dim < U.dim < S.dim and U.dim <= max_target and U not in spaces:
                    spaces.add(U)
                    out.append((f"{fx}:{name}:gen{j}", _through(Q.q, U)))
    return out
