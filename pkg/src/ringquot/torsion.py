"""Gabriel filters held by their minimal ideal, and the torsion they define.

In finite dimension every Gabriel filter of right ideals has a least member
I0, and I0 is a two-sided idempotent ideal; conversely any such ideal
generates a Gabriel filter {I : I >= I0}.  All filter questions reduce to
containments against I0.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .algebra import LEFT, RIGHT, TWO_SIDED, Algebra, Ideal, RingExtension, vector_label
from .bimodules import (
    BOTH,
    Bimodule,
    extension_bimodule,
    hom_module,
    injective_hull,
    injective_hull_left,
    killed_by_left,
    killed_by_right,
    left_regular,
    quotient_module,
    right_regular,
    submodule,
    tensor_over,
)
from .errors import EngineError, UnsupportedConfiguration, UsageError
from .linalg import Mat, Subspace, hstack, kernel, vstack

SYMMETRIC = "symmetric"


@dataclass(frozen=True, eq=False)
class FilterHandle:
    """A one-sided or symmetric Gabriel filter on ``ring``.

    One-sided handles use ``min_ideal``; symmetric ones carry ``min_left``
    (least left ideal) and ``min_right`` (least right ideal).
    """

    ring: Algebra
    side: str
    min_ideal: Ideal | None = None
    min_left: Ideal | None = None
    min_right: Ideal | None = None
    name: str = ""

    def __post_init__(self):
        if self.side in (LEFT, RIGHT):
            if self.min_ideal is None:
                raise UsageError("one-sided filter needs min_ideal")
        elif self.side == SYMMETRIC:
            if self.min_left is None or self.min_right is None:
                raise UsageError("symmetric filter needs min_left and min_right")
        else:
            raise UsageError(f"unknown filter side {self.side!r}")

    @property
    def left_handle(self) -> "FilterHandle":
        if self.side == LEFT:
            return self
        if self.side == SYMMETRIC:
            return FilterHandle(self.ring, LEFT, min_ideal=self.min_left, name=self.name)
        raise UsageError("right filter has no left part")

    @property
    def right_handle(self) -> "FilterHandle":
        if self.side == RIGHT:
            return self
        if self.side == SYMMETRIC:
            return FilterHandle(self.ring, RIGHT, min_ideal=self.min_right, name=self.name)
        raise UsageError("left filter has no right part")

    def contains(self, I: Ideal) -> bool:
        """Membership; for a symmetric handle I is two-sided and R/I must be torsion on both sides."""
        if self.side in (LEFT, RIGHT):
            return I.space.contains_space(self.min_ideal.space)
        return I.space.contains_space(self.min_left.space + self.min_right.space)


def handle_from_ideal(I: Ideal, side: str, name: str = "") -> FilterHandle:
    return FilterHandle(I.parent, side, min_ideal=Ideal(I.parent, side, I.space), name=name)


def improper_filter(R: Algebra, side: str = RIGHT) -> FilterHandle:
    """The filter {R}; nothing is torsion and quotients are R itself."""
    whole = Ideal.whole(R)
    if side == SYMMETRIC:
        return FilterHandle(R, side, min_left=whole, min_right=whole, name="improper")
    return FilterHandle(R, side, min_ideal=whole, name="improper")


def trivial_filter(R: Algebra, side: str = RIGHT) -> FilterHandle:
    """The filter of all ideals; every module is torsion."""
    z = Ideal.zero(R)
    if side == SYMMETRIC:
        return FilterHandle(R, side, min_left=z, min_right=z, name="all")
    return FilterHandle(R, side, min_ideal=z, name="all")


@dataclass
class AxiomReport:
    ok: bool
    witness: str = ""


def filter_axioms_check(h: FilterHandle) -> AxiomReport:
    """Gabriel axioms for {I >= I0}: colon-stability and the composition axiom.

    Colon-stability (I0 : r) >= I0 for all r means I0 is two-sided; the
    composition axiom applied to I0^2 forces I0^2 = I0, and conversely these
    two properties suffice.
    """
    if h.side == SYMMETRIC:
        for part in (h.left_handle, h.right_handle):
            rep = filter_axioms_check(part)
            if not rep.ok:
                return rep
        return AxiomReport(True)
    R, I0 = h.ring, h.min_ideal
    own = RIGHT if h.side == RIGHT else LEFT
    if not Ideal(R, own, I0.space).is_closed():
        return AxiomReport(False, f"min ideal is not a {own} ideal")
    other = R.left_basis if h.side == RIGHT else R.right_basis
    for k, M in enumerate(other):
        if not I0.space.contains_space(I0.space.image(M)):
            lab = R.labels[k]
            prod = f"{lab}*I0" if h.side == RIGHT else f"I0*{lab}"
            return AxiomReport(False, f"colon axiom fails: {prod} is not inside I0")
    sq = R.span_products(I0.space, I0.space)
    if sq != I0.space:
        v = next(v for v in I0.space.vectors() if not sq.contains(v))
        return AxiomReport(False, f"composition axiom fails: I0^2 != I0 (missing {_fmt(R, v)})")
    return AxiomReport(True)


def _fmt(R: Algebra, v: Mat) -> str:
    return vector_label(R, v)


# ---------------------------------------------------------------------------
# density and the Lambek filter


@lru_cache(maxsize=64)
def _hull(R: Algebra, side: str):
    if side == RIGHT:
        return injective_hull(right_regular(R))
    return injective_hull_left(left_regular(R))


def injective_hull_of_ring(R: Algebra, side: str = RIGHT):
    return _hull(R, side)


def is_dense(I: Ideal, side: str | None = None) -> bool:
    """Hom(R/I, E(R)) = 0, i.e. nothing in E(R) is killed by I."""
    side = side or I.side
    if side == TWO_SIDED:
        raise UsageError("is_dense needs a side for a two-sided ideal")
    E, _ = _hull(I.parent, side)
    if side == RIGHT:
        return killed_by_right(E, I.space).dim == 0
    return killed_by_left(E, I.space).dim == 0


def socle_classes(R: Algebra, side: str) -> list[int]:
    """Iso classes of simple tops that occur in the socle of R on that side."""
    dec = R.decomposition
    J = R.radical.space
    if side == RIGHT:
        soc = kernel(vstack(R.field, [R.rmat(j) for j in J.vectors()])) if J.dim else R.full
        mats = lambda e: R.rmat(e)
    else:
        soc = kernel(vstack(R.field, [R.lmat(j) for j in J.vectors()])) if J.dim else R.full
        mats = lambda e: R.lmat(e)
    out = []
    for c, cl in enumerate(dec.classes):
        e = dec.idempotents[cl[0]]
        if soc.image(mats(e)).dim:
            out.append(c)
    return out


def idempotent_ideal(R: Algebra, classes) -> Ideal:
    """R eps R where eps sums one idempotent from each listed class."""
    dec = R.decomposition
    eps = R.zero()
    for c in classes:
        eps = eps + dec.idempotents[dec.classes[c][0]]
    I = Ideal.generated(R, [eps], TWO_SIDED)
    return I


@dataclass
class DenseIdealResult:
    ideal: Ideal
    classes: list
    certificate: str


def minimal_dense_ideal(R: Algebra, side: str = RIGHT, cross_check: bool | None = None) -> Ideal:
    return minimal_dense_ideal_certified(R, side, cross_check).ideal


def minimal_dense_ideal_certified(R: Algebra, side: str = RIGHT,
                                  cross_check: bool | None = None) -> DenseIdealResult:
    """Least dense ideal on the given side.

    A right ideal I is dense iff R/I has no composition factor in the socle
    of R_R, iff R e R <= I for each primitive e whose top lies in the socle.
    So the least one is R eps R.  Over finite fields the greedy descent
    through dense maximal submodules is run as an independent check.
    """
    if side not in (LEFT, RIGHT):
        raise UsageError("minimal_dense_ideal side must be left or right")
    X = socle_classes(R, side)
    I = idempotent_ideal(R, X)
    D = Ideal(R, side, I.space)
    if not is_dense(D, side):
        raise EngineError("idempotent candidate for the least dense ideal is not dense")
    cert = "exact: socle composition factors"
    if cross_check is None:
        cross_check = R.field.is_finite and R.dim <= 12
    if cross_check:
        G = dense_descent(R, side)
        if G.space != D.space:
            raise EngineError("least dense ideal: idempotent route and descent disagree")
        cert += " + exhaustive descent"
    return DenseIdealResult(D, X, cert)


def maximal_submodules(M: Bimodule, side: str = RIGHT) -> list[Subspace]:
    """Maximal submodules of a one-sided module over a finite field.

    Each is the kernel of a nonzero map to a simple module.
    """
    A = M.right_ring if side == RIGHT else M.left_ring
    if not M.field.is_finite:
        raise UnsupportedConfiguration("maximal submodule enumeration needs a finite field")
    out = set()
    for S in simple_modules(A, side):
        maps = hom_module(M, S, side)
        if not maps:
            continue
        F = M.field
        for c in F.vectors(len(maps)):
            if all(x == 0 for x in c.entries()):
                continue
            X = F.mat(S.dim, M.dim)
            for coef, f in zip(c.entries(), maps):
                if coef != 0:
                    X = X + f.matrix * coef
            K = kernel(X)
            out.add(K)
    return sorted(out, key=lambda U: (U.dim, U.key))


@lru_cache(maxsize=64)
def _simples(A: Algebra, side: str):
    dec = A.decomposition
    J = A.radical.space
    out = []
    for cl in dec.classes:
        e = dec.idempotents[cl[0]]
        if side == RIGHT:
            P = Subspace.column_space(A.lmat(e))
            PJ = A.span_products(P, J)
            Pm, _ = submodule(right_regular(A), P)
        else:
            P = Subspace.column_space(A.rmat(e))
            PJ = A.span_products(J, P)
            Pm, _ = submodule(left_regular(A), P)
        sub = Subspace.span(A.field, P.dim, [P.coords(v) for v in PJ.vectors()])
        S, _ = quotient_module(Pm, sub)
        out.append(S)
    return tuple(out)


def simple_modules(A: Algebra, side: str = RIGHT) -> tuple:
    """One simple module per iso class, as e A / e J (right) or A e / J e (left)."""
    return _simples(A, side)


def dense_descent(R: Algebra, side: str = RIGHT) -> Ideal:
    """Greedy descent R > I1 > ... through dense maximal submodules."""
    reg = right_regular(R) if side == RIGHT else left_regular(R)
    cur = R.full
    while True:
        Im, inc = submodule(reg, cur)
        for K in maximal_submodules(Im, side):
            Kamb = Subspace.span(R.field, R.dim, [inc * v for v in K.vectors()])
            if is_dense(Ideal(R, side, Kamb), side):
                cur = Kamb
                break
        else:
            return Ideal(R, side, cur)


def lambek_filter(R: Algebra, side: str = RIGHT) -> FilterHandle:
    if side == SYMMETRIC:
        return induced_symmetric_filter(lambek_filter(R, LEFT), lambek_filter(R, RIGHT))
    return FilterHandle(R, side, min_ideal=minimal_dense_ideal(R, side), name="lambek")


# ---------------------------------------------------------------------------
# torsion


@dataclass
class TorsionReport:
    module: Bimodule
    torsion_sub: Subspace
    is_torsion: bool
    is_torsion_free: bool


def torsion_subspace(M: Bimodule, h: FilterHandle) -> Subspace:
    if h.side == RIGHT:
        return killed_by_right(M, h.min_ideal.space)
    if h.side == LEFT:
        return killed_by_left(M, h.min_ideal.space)
    return killed_by_right(M, h.min_right.space) & killed_by_left(M, h.min_left.space)


def torsion_submodule(M: Bimodule, h: FilterHandle) -> TorsionReport:
    t = torsion_subspace(M, h)
    if not M.is_closed(t, _action_side(M, h)):
        raise EngineError("torsion subspace is not a submodule; filter axioms violated")
    return TorsionReport(M, t, t.dim == M.dim, t.dim == 0)


def _action_side(M: Bimodule, h: FilterHandle) -> str:
    if h.side == SYMMETRIC:
        return BOTH
    return h.side


def induced_symmetric_filter(left: FilterHandle, right: FilterHandle) -> FilterHandle:
    if left.side != LEFT or right.side != RIGHT:
        raise UsageError("induced_symmetric_filter needs a left and a right handle")
    if left.ring is not right.ring and not left.ring.same_as(right.ring):
        raise UsageError("handles live on different rings")
    name = left.name if left.name == right.name else f"{left.name}|{right.name}"
    return FilterHandle(left.ring, SYMMETRIC, min_left=left.min_ideal, min_right=right.min_ideal,
                        name=name)


def symmetric_member_by_extension(K: Ideal, ext: RingExtension) -> bool:
    """S f(K) S = S."""
    S = ext.target
    fK = Subspace.span(S.field, S.dim, [ext(v) for v in K.vectors()])
    return S.span_products(S.span_products(S.full, fK), S.full).dim == S.dim


# ---------------------------------------------------------------------------
# tensoring with an extension


@dataclass(frozen=True, eq=False)
class TensorData:
    """M -> target together with the tensor products used to build it."""

    map: Mat
    target: Bimodule
    stages: tuple


def i_map(M: Bimodule, ext: RingExtension, side: str) -> TensorData:
    """The canonical map i_M into M (x) S, S (x) M, or S (x) M (x) S."""
    R = ext.source
    F = R.field
    oneS = ext.target.unit
    if side == RIGHT:
        if not M.right_ring.same_as(R):
            raise UsageError("i_map: module's right ring is not the source")
        T = tensor_over(M, extension_bimodule(ext, left=True, right=False))
        cols = [T.pure(F.unit_vector(M.dim, j), oneS) for j in range(M.dim)]
        return TensorData(hstack(F, cols, rows=T.dim), T.module, (T,))
    if side == LEFT:
        if not M.left_ring.same_as(R):
            raise UsageError("i_map: module's left ring is not the source")
        T = tensor_over(extension_bimodule(ext, left=False, right=True), M)
        cols = [T.pure(oneS, F.unit_vector(M.dim, j)) for j in range(M.dim)]
        return TensorData(hstack(F, cols, rows=T.dim), T.module, (T,))
    if side in (SYMMETRIC, BOTH, TWO_SIDED):
        T1 = tensor_over(extension_bimodule(ext, left=False, right=True), M)
        T2 = tensor_over(T1.module, extension_bimodule(ext, left=True, right=False))
        cols = [T2.pure(T1.pure(oneS, F.unit_vector(M.dim, j)), oneS) for j in range(M.dim)]
        return TensorData(hstack(F, cols, rows=T2.dim), T2.module, (T1, T2))
    raise UsageError(f"unknown side {side!r}")


def tensoring_kernel(M: Bimodule, ext: RingExtension, side: str) -> Subspace:
    """ker(i_M); the torsion submodule for the tensoring theory when S is flat."""
    return kernel(i_map(M, ext, side).map)


def tensoring_filter_min(ext: RingExtension, side: str) -> Ideal | None:
    """Least two-sided idempotent K with f(K)S = S (right), S f(K) = S (left),
    or S f(K) S = S (symmetric); None when the candidates have no least member.

    Candidates are the ideals R eps R over sets of idempotent classes, which
    covers every idempotent two-sided ideal of a finite-dimensional algebra.
    """
    R, S = ext.source, ext.target
    dec = R.decomposition
    nclass = dec.class_count

    def generates(K: Ideal) -> bool:
        fK = Subspace.span(S.field, S.dim, [ext(v) for v in K.vectors()])
        if side == RIGHT:
            W = S.span_products(fK, S.full)
        elif side == LEFT:
            W = S.span_products(S.full, fK)
        else:
            W = S.span_products(S.span_products(S.full, fK), S.full)
        return W.dim == S.dim

    good = []
    for r in range(nclass + 1):
        for X in combinations(range(nclass), r):
            K = idempotent_ideal(R, X)
            if generates(K):
                good.append(K)
    if not good:
        raise EngineError("the whole ring fails f(R)S = S")
    least = [K for K in good if all(K.space <= G.space for G in good)]
    if not least:
        return None
    K = least[0]
    if not K.is_idempotent():
        raise EngineError("idempotent-generated ideal is not idempotent")
    return K
