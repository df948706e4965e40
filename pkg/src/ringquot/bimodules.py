"""Finite-dimensional bimodules given by action matrices.

A one-sided right A-module is a Bimodule whose left ring is the base field
(acting by scalars); a left module has the base field on the right.  Left
A-modules and right A^op-modules share their matrices, which is how the
left-sided constructions are reduced to right-sided ones.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .algebra import (
    LEFT,
    RIGHT,
    TWO_SIDED,
    Algebra,
    Ideal,
    RingExtension,
    base_field,
    close_under_mats,
)
from .errors import EngineError, UsageError, ValidationError
from .linalg import Field, Mat, Subspace, field_of, hstack, kernel, kron, preimage, solve, vstack

BOTH = "both"


@dataclass(frozen=True, eq=False)
class Bimodule:
    """A left_ring-right_ring bimodule of dimension ``dim``.

    ``lact[i]`` is the matrix of m -> e_i m and ``ract[j]`` that of m -> m e_j.
    """

    left_ring: Algebra
    right_ring: Algebra
    dim: int
    lact: tuple
    ract: tuple
    name: str = ""

    @property
    def field(self) -> Field:
        return self.right_ring.field

    def __repr__(self):
        nm = f" {self.name}" if self.name else ""
        return f"<Bimodule{nm} dim={self.dim} ({self.left_ring.dim}|{self.right_ring.dim})>"

    def left(self, a: Mat) -> Mat:
        """Matrix of m -> a m."""
        return _combine(self.field, self.dim, self.lact, a)

    def right(self, b: Mat) -> Mat:
        """Matrix of m -> m b."""
        return _combine(self.field, self.dim, self.ract, b)

    def action_mats(self, side: str) -> list[Mat]:
        """Action matrices of algebra generators on the given side(s)."""
        out = []
        if side in (LEFT, BOTH, TWO_SIDED):
            out += [self.lact[g] for g in self.left_ring.generators]
        if side in (RIGHT, BOTH, TWO_SIDED):
            out += [self.ract[g] for g in self.right_ring.generators]
        return out

    @property
    def is_right_module(self) -> bool:
        return self.left_ring.dim == 1

    @property
    def is_left_module(self) -> bool:
        return self.right_ring.dim == 1

    def full(self) -> Subspace:
        return Subspace.full(self.field, self.dim)

    def zero_space(self) -> Subspace:
        return Subspace.zero(self.field, self.dim)

    def validate(self) -> "Bimodule":
        A, B, F, m = self.left_ring, self.right_ring, self.field, self.dim
        I = F.eye(m)
        if len(self.lact) != A.dim or len(self.ract) != B.dim:
            raise UsageError("bimodule: wrong number of action matrices")
        if self.left(A.unit) != I or self.right(B.unit) != I:
            raise ValidationError("identity does not act as identity")
        for i, j in itertools.product(range(A.dim), repeat=2):
            if self.left(A.table[i][j]) != self.lact[i] * self.lact[j]:
                raise ValidationError(f"left action fails on (e{i}, e{j})")
        for i, j in itertools.product(range(B.dim), repeat=2):
            if self.right(B.table[i][j]) != self.ract[j] * self.ract[i]:
                raise ValidationError(f"right action fails on (e{i}, e{j})")
        for i, j in itertools.product(range(A.dim), range(B.dim)):
            if self.lact[i] * self.ract[j] != self.ract[j] * self.lact[i]:
                raise ValidationError(f"left and right actions do not commute on (e{i}, e{j})")
        return self

    def closure(self, U: Subspace, side: str = BOTH) -> Subspace:
        return close_under_mats(U, self.action_mats(side))

    def is_closed(self, U: Subspace, side: str = BOTH) -> bool:
        return all(U.contains_space(U.image(M)) for M in self.action_mats(side))


def _combine(F: Field, m: int, mats: Sequence[Mat], a: Mat) -> Mat:
    out = F.mat(m, m)
    for k, c in enumerate(a.entries()):
        if c != 0:
            out = out + mats[k] * c
    return out


@dataclass(frozen=True, eq=False)
class BimoduleMap:
    source: Bimodule
    target: Bimodule
    matrix: Mat

    def __call__(self, v: Mat) -> Mat:
        return self.matrix * v

    def is_homomorphism(self, side: str = BOTH) -> bool:
        X = self.matrix
        S, T = self.source, self.target
        if side in (LEFT, BOTH, TWO_SIDED):
            if any(X * S.lact[g] != T.lact[g] * X for g in S.left_ring.generators):
                return False
        if side in (RIGHT, BOTH, TWO_SIDED):
            if any(X * S.ract[g] != T.ract[g] * X for g in S.right_ring.generators):
                return False
        return True

    @cached_property
    def kernel(self) -> Subspace:
        return kernel(self.matrix)

    @cached_property
    def image(self) -> Subspace:
        return Subspace.column_space(self.matrix)

    @property
    def is_injective(self) -> bool:
        return self.kernel.dim == 0

    @property
    def is_surjective(self) -> bool:
        return self.image.dim == self.target.dim

    def compose(self, other: "BimoduleMap") -> "BimoduleMap":
        """self after other."""
        return BimoduleMap(other.source, self.target, self.matrix * other.matrix)


# ---------------------------------------------------------------------------
# constructors


def regular_bimodule(A: Algebra) -> Bimodule:
    return Bimodule(A, A, A.dim, tuple(A.left_basis), tuple(A.right_basis), name="regular")


def right_regular(A: Algebra) -> Bimodule:
    k = base_field(A.field)
    return Bimodule(k, A, A.dim, (A.field.eye(A.dim),), tuple(A.right_basis), name="R_R")


def left_regular(A: Algebra) -> Bimodule:
    k = base_field(A.field)
    return Bimodule(A, k, A.dim, tuple(A.left_basis), (A.field.eye(A.dim),), name="_RR")


def right_module(A: Algebra, ract: Sequence[Mat], name: str = "") -> Bimodule:
    k = base_field(A.field)
    m = ract[0].nrows()
    return Bimodule(k, A, m, (A.field.eye(m),), tuple(ract), name=name)


def left_module(A: Algebra, lact: Sequence[Mat], name: str = "") -> Bimodule:
    k = base_field(A.field)
    m = lact[0].nrows()
    return Bimodule(A, k, m, tuple(lact), (A.field.eye(m),), name=name)


def one_sided(M: Bimodule, side: str) -> Bimodule:
    """Forget the action on the other side."""
    k = base_field(M.field)
    I = M.field.eye(M.dim)
    if side == RIGHT:
        return Bimodule(k, M.right_ring, M.dim, (I,), M.ract, name=M.name)
    if side == LEFT:
        return Bimodule(M.left_ring, k, M.dim, M.lact, (I,), name=M.name)
    raise UsageError(f"one_sided: side must be left or right, got {side!r}")


def left_as_right_op(M: Bimodule) -> Bimodule:
    """A left A-module seen as a right A^op-module (same matrices)."""
    if not M.is_left_module:
        raise UsageError("expected a left module")
    return right_module(M.left_ring.op, M.lact, name=M.name)


def right_as_left_op(M: Bimodule) -> Bimodule:
    """A right A-module seen as a left A^op-module (same matrices)."""
    if not M.is_right_module:
        raise UsageError("expected a right module")
    return left_module(M.right_ring.op, M.ract, name=M.name)


def restrict(M: Bimodule, left: RingExtension | None = None,
             right: RingExtension | None = None) -> Bimodule:
    """Restriction of scalars along ring maps into M's rings."""
    lr, lact = M.left_ring, M.lact
    rr, ract = M.right_ring, M.ract
    if left is not None:
        if not left.target.same_as(M.left_ring):
            raise UsageError("restrict: left map does not land in the left ring")
        lr = left.source
        lact = tuple(M.left(left(lr.basis(i))) for i in range(lr.dim))
    if right is not None:
        if not right.target.same_as(M.right_ring):
            raise UsageError("restrict: right map does not land in the right ring")
        rr = right.source
        ract = tuple(M.right(right(rr.basis(j))) for j in range(rr.dim))
    return Bimodule(lr, rr, M.dim, lact, ract, name=M.name)


def extension_bimodule(ext: RingExtension, left: bool = True, right: bool = True) -> Bimodule:
    """S as an R-S, S-R or R-R bimodule (``left``/``right`` say which sides use R)."""
    S = regular_bimodule(ext.target)
    return restrict(S, ext if left else None, ext if right else None)


def sub_bimodule_generated(M: Bimodule, vectors, side: str = BOTH) -> Subspace:
    return M.closure(Subspace.span(M.field, M.dim, list(vectors)), side)


def submodule(M: Bimodule, U: Subspace) -> tuple[Bimodule, Mat]:
    """U as a bimodule together with its inclusion matrix."""
    if not M.is_closed(U):
        raise ValidationError("subspace is not closed under the actions")
    B = U.matrix()

    def restrict_mat(A):
        return hstack(M.field, [U.coords(A * v) for v in U.vectors()], rows=U.dim)

    lact = tuple(restrict_mat(A) for A in M.lact)
    ract = tuple(restrict_mat(A) for A in M.ract)
    return Bimodule(M.left_ring, M.right_ring, U.dim, lact, ract, name="sub"), B


def quotient_module(M: Bimodule, U: Subspace) -> tuple[Bimodule, Mat]:
    """M/U with induced actions, plus the projection matrix."""
    if not M.is_closed(U):
        raise ValidationError("quotient by a subspace that is not a sub-bimodule")
    Q = U.quotient_matrix()
    comp = U.complement_indices()

    def induced(A):
        QA = Q * A
        return M.field.mat(len(comp), len(comp), [QA[i, j] for i in range(len(comp)) for j in comp])

    lact = tuple(induced(A) for A in M.lact)
    ract = tuple(induced(A) for A in M.ract)
    return Bimodule(M.left_ring, M.right_ring, len(comp), lact, ract, name="quot"), Q


def direct_sum(mods: Sequence[Bimodule]) -> Bimodule:
    M0 = mods[0]
    F = M0.field
    dims = [M.dim for M in mods]
    N = sum(dims)

    def block(mats):
        out = F.mat(N, N)
        o = 0
        for A, d in zip(mats, dims):
            for i in range(d):
                for j in range(d):
                    out[o + i, o + j] = A[i, j]
            o += d
        return out

    lact = tuple(block([M.lact[i] for M in mods]) for i in range(M0.left_ring.dim))
    ract = tuple(block([M.ract[j] for M in mods]) for j in range(M0.right_ring.dim))
    return Bimodule(M0.left_ring, M0.right_ring, N, lact, ract, name="sum")


def dual(M: Bimodule) -> Bimodule:
    """Hom_k(M, k) as a right_ring-left_ring bimodule (dual basis coordinates)."""
    lact = tuple(A.transpose() for A in M.ract)
    ract = tuple(A.transpose() for A in M.lact)
    return Bimodule(M.right_ring, M.left_ring, M.dim, lact, ract, name=f"D({M.name})")


# ---------------------------------------------------------------------------
# Hom and tensor


def _hom_system(M: Bimodule, N: Bimodule, side: str) -> Mat:
    F = M.field
    Im, In = F.eye(M.dim), F.eye(N.dim)
    blocks = []
    if side in (LEFT, BOTH, TWO_SIDED):
        if not M.left_ring.same_as(N.left_ring):
            raise UsageError("hom: left rings differ")
        for g in M.left_ring.generators:
            blocks.append(kron(M.lact[g].transpose(), In) - kron(Im, N.lact[g]))
    if side in (RIGHT, BOTH, TWO_SIDED):
        if not M.right_ring.same_as(N.right_ring):
            raise UsageError("hom: right rings differ")
        for g in M.right_ring.generators:
            blocks.append(kron(M.ract[g].transpose(), In) - kron(Im, N.ract[g]))
    return vstack(F, blocks, cols=M.dim * N.dim)


def unvec(F: Field, v: Mat, rows: int, cols: int) -> Mat:
    """Inverse of column-stacking vectorisation."""
    e = v.entries()
    return F.mat(rows, cols, [e[j * rows + i] for i in range(rows) for j in range(cols)])


def vec(X: Mat) -> Mat:
    F = field_of(X)
    r, c = X.nrows(), X.ncols()
    return F.mat(r * c, 1, [X[i, j] for j in range(c) for i in range(r)])


def hom_space(M: Bimodule, N: Bimodule, side: str = BOTH) -> Subspace:
    """Hom(M, N) as a subspace of vectorised dim N x dim M matrices."""
    return kernel(_hom_system(M, N, side))


def hom_module(M: Bimodule, N: Bimodule, side: str = BOTH) -> list[BimoduleMap]:
    F = M.field
    H = hom_space(M, N, side)
    return [BimoduleMap(M, N, unvec(F, v, N.dim, M.dim)) for v in H.vectors()]


@dataclass(frozen=True, eq=False)
class TensorProduct:
    """M (x)_B N with its projection from M (x)_k N (index i * dim N + j)."""

    module: Bimodule
    projection: Mat
    left_factor: Bimodule
    right_factor: Bimodule
    complement: tuple

    def lift(self) -> Mat:
        """A section of the projection: unit vectors at the complement indices."""
        F = self.module.field
        L = F.mat(self.left_factor.dim * self.right_factor.dim, self.module.dim)
        for c, j in enumerate(self.complement):
            L[j, c] = F.one
        return L

    def pure(self, m: Mat, n: Mat) -> Mat:
        return self.projection * kron(m, n)

    @property
    def dim(self) -> int:
        return self.module.dim


def tensor_over(M: Bimodule, N: Bimodule) -> TensorProduct:
    """M (x)_B N for B = right ring of M = left ring of N."""
    B = M.right_ring
    if not B.same_as(N.left_ring):
        raise UsageError("tensor_over: middle rings differ")
    F = M.field
    Im, In = F.eye(M.dim), F.eye(N.dim)
    rel_blocks = [kron(M.ract[g], In) - kron(Im, N.lact[g]) for g in B.generators]
    big = M.dim * N.dim
    rels = Subspace.column_space(hstack(F, rel_blocks, rows=big))
    Q = rels.quotient_matrix()
    comp = rels.complement_indices()
    d = len(comp)

    def induced(A):
        QA = Q * A
        return F.mat(d, d, [QA[i, j] for i in range(d) for j in comp])

    lact = tuple(induced(kron(A, In)) for A in M.lact)
    ract = tuple(induced(kron(Im, A)) for A in N.ract)
    T = Bimodule(M.left_ring, N.right_ring, d, lact, ract, name=f"{M.name}(x){N.name}")
    return TensorProduct(T, Q, M, N, tuple(comp))


def tensor_map(T1: TensorProduct, T2: TensorProduct, f: Mat, g: Mat) -> Mat:
    """Matrix of f (x) g : T1 -> T2 on the quotient coordinates."""
    return T2.projection * kron(f, g) * T1.lift()


# ---------------------------------------------------------------------------
# colon ideals


def colon_left(M: Bimodule, N: Subspace, m: Mat) -> Ideal:
    """{r in left ring : r m in N}, a left ideal when N is a left submodule."""
    A = M.left_ring
    cols = hstack(M.field, [M.lact[i] * m for i in range(A.dim)], rows=M.dim)
    return Ideal(A, LEFT, preimage(cols, N))


def colon_right(M: Bimodule, m: Mat, N: Subspace) -> Ideal:
    """{r in right ring : m r in N}, a right ideal when N is a right submodule."""
    A = M.right_ring
    cols = hstack(M.field, [M.ract[i] * m for i in range(A.dim)], rows=M.dim)
    return Ideal(A, RIGHT, preimage(cols, N))


def annihilator_right(M: Bimodule, U: Subspace | None = None) -> Ideal:
    """{r : U r = 0}, a two-sided ideal when U = M."""
    A = M.right_ring
    U = M.full() if U is None else U
    F = M.field
    rows = []
    for u in U.vectors():
        rows.append(hstack(F, [M.ract[i] * u for i in range(A.dim)], rows=M.dim))
    if not rows:
        return Ideal(A, TWO_SIDED, A.full)
    return Ideal(A, TWO_SIDED if U == M.full() else RIGHT, kernel(vstack(F, rows)))


def annihilator_left(M: Bimodule, U: Subspace | None = None) -> Ideal:
    A = M.left_ring
    U = M.full() if U is None else U
    F = M.field
    rows = []
    for u in U.vectors():
        rows.append(hstack(F, [M.lact[i] * u for i in range(A.dim)], rows=M.dim))
    if not rows:
        return Ideal(A, TWO_SIDED, A.full)
    return Ideal(A, TWO_SIDED if U == M.full() else LEFT, kernel(vstack(F, rows)))


def killed_by_right(M: Bimodule, I: Subspace) -> Subspace:
    """{m : m I = 0} for a subspace I of the right ring."""
    F = M.field
    vs = I.vectors()
    if not vs:
        return M.full()
    return kernel(vstack(F, [M.right(x) for x in vs]))


def killed_by_left(M: Bimodule, I: Subspace) -> Subspace:
    """{m : I m = 0} for a subspace I of the left ring."""
    F = M.field
    vs = I.vectors()
    if not vs:
        return M.full()
    return kernel(vstack(F, [M.left(x) for x in vs]))


def module_times_ideal(M: Bimodule, U: Subspace, I: Subspace) -> Subspace:
    """span{u i : u in U, i in I}."""
    return Subspace.span(M.field, M.dim, [M.right(x) * u for u in U.vectors() for x in I.vectors()])


def ideal_times_module(M: Bimodule, I: Subspace, U: Subspace) -> Subspace:
    return Subspace.span(M.field, M.dim, [M.left(x) * u for u in U.vectors() for x in I.vectors()])


# ---------------------------------------------------------------------------
# radical layers, covers and hulls (right modules)


def radical_submodule(M: Bimodule) -> Subspace:
    """M J for a right module M."""
    return module_times_ideal(M, M.full(), M.right_ring.radical.space)


def socle(M: Bimodule) -> Subspace:
    """{m : m J = 0} for a right module M."""
    return killed_by_right(M, M.right_ring.radical.space)


def projective_cover(M: Bimodule) -> tuple[Bimodule, BimoduleMap]:
    """Projective cover P -> M of a right module, P a sum of e A's."""
    if not M.is_right_module:
        raise UsageError("projective_cover expects a right module")
    A = M.right_ring
    F = A.field
    dec = A.decomposition
    cur = radical_submodule(M)
    gens = []  # (idempotent, vector)
    for cl in dec.classes:
        e = dec.idempotents[cl[0]]
        for v in Subspace.column_space(M.right(e)).vectors():
            if cur.contains(v):
                continue
            gens.append((e, v))
            cur = cur + Subspace.span(F, M.dim, [M.ract[k] * v for k in range(A.dim)])
    if cur.dim != M.dim:
        raise EngineError("projective cover generators do not span the top")
    pieces, cols = [], []
    R_A = right_regular(A)
    for e, v in gens:
        eA = Subspace.column_space(A.lmat(e))
        P_i, _ = submodule(R_A, eA)
        pieces.append(P_i)
        cols += [M.right(w) * v for w in eA.vectors()]
    if not pieces:
        P = right_module(A, [F.mat(0, 0)] * A.dim)
    else:
        P = direct_sum(pieces)
    # direct_sum of submodules uses each piece's canonical basis, matching cols
    pi = BimoduleMap(P, M, hstack(F, cols, rows=M.dim))
    if not pi.is_surjective:
        raise EngineError("projective cover map is not surjective")
    return P, pi


def injective_hull(M: Bimodule) -> tuple[Bimodule, BimoduleMap]:
    """Injective hull M -> E(M) of a right module, as D(P(D(M)))."""
    if not M.is_right_module:
        raise UsageError("injective_hull expects a right module")
    DM = left_as_right_op(dual(M))
    P, pi = projective_cover(DM)
    E = left_as_right_op(dual(P))  # a left A^op-module is a right A-module
    E = Bimodule(M.left_ring, M.right_ring, E.dim, (M.field.eye(E.dim),), E.ract, name="E")
    emb = BimoduleMap(M, E, pi.matrix.transpose())
    if not emb.is_injective:
        raise EngineError("hull embedding is not injective")
    return E, emb


def injective_hull_left(M: Bimodule) -> tuple[Bimodule, BimoduleMap]:
    """Injective hull of a left module via the opposite algebra."""
    E, emb = injective_hull(left_as_right_op(M))
    El = Bimodule(M.left_ring, M.right_ring, E.dim, E.ract, (M.field.eye(E.dim),), name="E")
    return El, BimoduleMap(M, El, emb.matrix)


def is_essential(M: Bimodule, image: Subspace) -> bool:
    """Every nonzero submodule meets ``image``; enough to test the socle."""
    soc = socle(M)
    return image.contains_space(soc)


# ---------------------------------------------------------------------------
# enumeration (finite fields)


def submodules(M: Bimodule, side: str = BOTH, cap: int = 12) -> list[Subspace]:
    """All sub(bi)modules over a finite field.

    Walks the lattice by simple extensions: every W > U contains some
    U + vR with v + U in the socle of M/U, so only those v are tried.
    """
    F = M.field
    if not F.is_finite:
        raise UsageError("submodule enumeration needs a finite field")
    if M.dim > cap:
        raise UsageError(f"submodule enumeration capped at dim {cap}, module has dim {M.dim}")
    span_mats = spanning_action_mats(M, side)
    rad_mats = []
    if side in (LEFT, BOTH, TWO_SIDED):
        rad_mats += [M.left(j) for j in M.left_ring.radical.vectors()]
    if side in (RIGHT, BOTH, TWO_SIDED):
        rad_mats += [M.right(j) for j in M.right_ring.radical.vectors()]
    zero = M.zero_space()
    found = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for U in frontier:
            if U.dim == M.dim:
                continue
            Q = U.quotient_matrix()
            soc_pre = kernel(vstack(F, [Q * X for X in rad_mats])) if rad_mats else M.full()
            top = Subspace.span(F, M.dim, [U.reduce(v) for v in soc_pre.vectors()])
            B = top.matrix()
            for c in _projective_points(F, top.dim):
                v = B * c
                W = U + Subspace.span(F, M.dim, [X * v for X in span_mats])
                if W not in found:
                    found.add(W)
                    nxt.append(W)
        frontier = nxt
    return sorted(found, key=lambda U: (U.dim, U.key))


def spanning_action_mats(M: Bimodule, side: str) -> list[Mat]:
    """Matrices X with A m B = span{X m} (identity included)."""
    if side == RIGHT:
        return list(M.ract)
    if side == LEFT:
        return list(M.lact)
    return [L * R for L in M.lact for R in M.ract]


def _projective_points(F: Field, n: int):
    """Nonzero vectors up to scalars (first nonzero entry equals 1)."""
    for v in F.vectors(n):
        es = v.entries()
        first = next((x for x in es if x != 0), None)
        if first is not None and first == 1:
            yield v


def ideals(A: Algebra, side: str, cap: int = 12) -> list[Ideal]:
    M = regular_bimodule(A)
    sd = {LEFT: LEFT, RIGHT: RIGHT, TWO_SIDED: BOTH}[side]
    return [Ideal(A, side, U) for U in submodules(M, sd, cap)]


def baer_check(E: Bimodule, cap: int = 12) -> bool:
    """Baer criterion for a right module over a finite field: maps I -> E extend to R."""
    A = E.right_ring
    RA = right_regular(A)
    for I in ideals(A, RIGHT, cap):
        if I.dim == 0 or I.dim == A.dim:
            continue
        Imod, inc = submodule(RA, I.space)
        for f in hom_module(Imod, E, RIGHT):
            # f extends iff f(i) = x i for some x in E, i.e. f = (e -> x . i) on I
            sys_cols = [E.right(i) for i in I.vectors()]
            target = vstack(E.field, [f.matrix * Imod.field.unit_vector(I.dim, k) for k in range(I.dim)])
            stacked = vstack(E.field, sys_cols)
            if solve(stacked, target) is None:
                return False
    return True
