"""Modules and rings of quotients with respect to filters held by minimal ideals.

One-sided: M_F = Hom_R(I0, M/tM).  Since I0 is least in the filter the
direct limit is this single Hom; every r in R acts by (f r)(i) = f(r i).

Symmetric: compatible pairs (f, g) with f: I0 -> M/t (left linear),
g: J0 -> M/t (right linear) and f(i) j = i g(j).  Products of pairs are
(f, g)(f', g') = (f' o f, g o g'), so r maps to (right mult by r, left mult by r).

Hom elements are stored as matrices X (dim target x dim ideal) in the
canonical bases, vectorised column by column.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .algebra import (
    LEFT,
    RIGHT,
    Algebra,
    Ideal,
    RingExtension,
    certify_matrix_algebra,
    is_simple,
)
from .bimodules import (
    Bimodule,
    BimoduleMap,
    hom_space,
    ideal_times_module,
    module_times_ideal,
    one_sided,
    quotient_module,
    regular_bimodule,
    right_regular,
    submodule,
    tensor_over,
    unvec,
    vec,
)
from .errors import EngineError, PreconditionError, UsageError
from .linalg import Mat, Subspace, entries, hstack, kernel, kron, rank, solve, solve_many, vstack
from .torsion import (
    SYMMETRIC,
    FilterHandle,
    injective_hull_of_ring,
    lambek_filter,
    torsion_subspace,
)


@dataclass(frozen=True, eq=False)
class QuotientRing:
    """A computed quotient ring with its map from R."""

    ring: Algebra
    q: RingExtension
    provenance: str
    handle: FilterHandle | None = None
    data: dict = dc_field(default_factory=dict, compare=False)

    @property
    def dim(self) -> int:
        return self.ring.dim

    @property
    def source(self) -> Algebra:
        return self.q.source

    @property
    def image(self) -> Subspace:
        return self.q.image

    @property
    def equals_source(self) -> bool:
        """q is bijective, i.e. the quotient is R itself."""
        return self.q.is_injective and self.ring.dim == self.source.dim

    def certificate(self) -> str:
        return certify_matrix_algebra(self.ring)


# ---------------------------------------------------------------------------
# helpers


def _ideal_mult(R: Algebra, U: Subspace, side: str, r: Mat) -> Mat:
    """Matrix of u -> r u (side=LEFT) or u -> u r (side=RIGHT) in U's coordinates."""
    M = R.lmat(r) if side == LEFT else R.rmat(r)
    return hstack(R.field, [U.coords(M * u) for u in U.vectors()], rows=U.dim)


def _projected_basis(proj: Mat, U: Subspace) -> Mat:
    """Images of U's basis under a projection, as columns."""
    F = U.field
    return hstack(F, [proj * u for u in U.vectors()], rows=proj.nrows())


def _lift(piI: Mat, X: Mat) -> Mat:
    """Coordinates in I0 of the columns of X, which lie in the image of piI."""
    Y = solve_many(piI, X)
    if Y is None:
        raise EngineError("hom value leaves the image of the minimal ideal")
    return Y


def _vec_coords(H: Subspace, X: Mat) -> Mat:
    v = vec(X)
    if not H.contains(v):
        raise EngineError("result left the hom space")
    return H.coords(v)


# ---------------------------------------------------------------------------
# one-sided


@dataclass(frozen=True, eq=False)
class ModuleOfQuotients:
    module: Bimodule
    q: BimoduleMap
    hom: Subspace
    torsion: Subspace
    ideal: Subspace
    iterations: int


def module_of_quotients(M: Bimodule, h: FilterHandle, max_iter: int | None = None) -> ModuleOfQuotients:
    """M_F for a right handle (left handles go through the opposite ring)."""
    if h.side == LEFT:
        return _left_module_of_quotients(M, h, max_iter)
    if h.side != RIGHT:
        raise UsageError("module_of_quotients needs a one-sided handle")
    cur = _one_step(M, h)
    base = cur
    limit = max_iter if max_iter is not None else 2 * (M.dim + h.ring.dim) + 2
    it = 1
    while True:
        nxt = _one_step(cur.module, h)
        if rank(nxt.q.matrix) == nxt.module.dim == cur.module.dim:
            break
        it += 1
        if it > limit:
            raise EngineError("module of quotients did not stabilise")
        # compose localisation maps
        cur = ModuleOfQuotients(nxt.module, BimoduleMap(M, nxt.module, nxt.q.matrix * cur.q.matrix),
                                nxt.hom, base.torsion, base.ideal, it)
    return ModuleOfQuotients(cur.module, cur.q, cur.hom, base.torsion, base.ideal, it)


def _one_step(M: Bimodule, h: FilterHandle) -> ModuleOfQuotients:
    R = h.ring
    F = R.field
    I0 = h.min_ideal.space
    t = torsion_subspace(M, h)
    Mbar, proj = quotient_module(M, t)
    I0mod, _ = submodule(right_regular(R), I0)
    H = hom_space(I0mod, one_sided(Mbar, RIGHT), RIGHT)
    maps = [unvec(F, v, Mbar.dim, I0.dim) for v in H.vectors()]
    d = H.dim

    def act(transform) -> Mat:
        return hstack(F, [_vec_coords(H, transform(X)) for X in maps], rows=d)

    ract = tuple(act(lambda X, r=r: X * _ideal_mult(R, I0, LEFT, R.basis(r))) for r in range(R.dim))
    lact = tuple(act(lambda X, a=a: Mbar.lact[a] * X) for a in range(M.left_ring.dim))
    N = Bimodule(M.left_ring, R, d, lact, ract, name=f"{M.name}_F")
    cols = []
    for j in range(M.dim):
        m = proj * F.unit_vector(M.dim, j)
        X = hstack(F, [Mbar.right(i) * m for i in I0.vectors()], rows=Mbar.dim)
        cols.append(_vec_coords(H, X))
    q = BimoduleMap(M, N, hstack(F, cols, rows=d))
    return ModuleOfQuotients(N, q, H, t, I0, 1)


def _left_module_of_quotients(M: Bimodule, h: FilterHandle, max_iter) -> ModuleOfQuotients:
    R = h.ring
    Mop = Bimodule(M.right_ring.op, R.op, M.dim, M.ract, M.lact, name=M.name)
    hop = FilterHandle(R.op, RIGHT, min_ideal=Ideal(R.op, RIGHT, h.min_ideal.space), name=h.name)
    res = module_of_quotients(Mop, hop, max_iter)
    N = res.module
    back = Bimodule(R, M.right_ring, N.dim, N.ract, N.lact, name=N.name)
    return ModuleOfQuotients(back, BimoduleMap(M, back, res.q.matrix), res.hom, res.torsion,
                             res.ideal, res.iterations)


def ring_of_quotients(h: FilterHandle) -> QuotientRing:
    """R_F = Hom_R(I0, R/tR) with composition, for a one-sided handle."""
    if h.side == LEFT:
        R = h.ring
        hop = FilterHandle(R.op, RIGHT, min_ideal=Ideal(R.op, RIGHT, h.min_ideal.space), name=h.name)
        Qop = ring_of_quotients(hop)
        ring = Qop.ring.op
        q = RingExtension(R, ring, Qop.q.matrix).validate()
        return QuotientRing(ring, q, f"left {h.name}", h, dict(Qop.data, side=LEFT))
    if h.side != RIGHT:
        raise UsageError("ring_of_quotients needs a one-sided handle")
    R = h.ring
    F = R.field
    I0 = h.min_ideal.space
    t = torsion_subspace(regular_bimodule(R), h)
    Rbar, proj = quotient_module(one_sided(regular_bimodule(R), RIGHT), t)
    I0mod, _ = submodule(right_regular(R), I0)
    H = hom_space(I0mod, Rbar, RIGHT)
    maps = [unvec(F, v, Rbar.dim, I0.dim) for v in H.vectors()]
    piI = _projected_basis(proj, I0)
    lifts = [_lift(piI, X) for X in maps]
    table = [[_vec_coords(H, maps[a] * lifts[b]) for b in range(H.dim)] for a in range(H.dim)]
    unit = _vec_coords(H, piI)
    labels = [f"q{k}" for k in range(H.dim)]
    ring = Algebra(F, table, unit, labels=labels, name=f"Q_{h.name}")
    qcols = [_vec_coords(H, proj * R.lmat(R.basis(r)) * I0.matrix()) for r in range(R.dim)]
    q = RingExtension(R, ring, hstack(F, qcols, rows=H.dim)).validate()
    return QuotientRing(ring, q, f"right {h.name}", h,
                        {"hom": H, "maps": maps, "ideal": I0, "projection": proj, "side": RIGHT})


def q_max(R: Algebra, side: str = RIGHT, cross_route: bool = True) -> QuotientRing:
    """Maximal one-sided ring of quotients; optionally confirmed by the bicommutant route."""
    Q = ring_of_quotients(lambek_filter(R, side))
    if cross_route:
        B = q_max_bicommutant(R, side)
        iso = bicommutant_to_hom(R, B, Q)
        if iso is None:
            raise EngineError("Q_max: Lambek and bicommutant routes disagree")
        Q.data["bicommutant_dim"] = B.dim
    return QuotientRing(Q.ring, Q.q, "qlmax" if side == LEFT else "qmax", Q.handle, Q.data)


def q_lmax(R: Algebra, cross_route: bool = True) -> QuotientRing:
    return q_max(R, LEFT, cross_route)


# ---------------------------------------------------------------------------
# bicommutant route


def q_max_bicommutant(R: Algebra, side: str = RIGHT) -> QuotientRing:
    """End_H(E) with H = End_R(E), E the injective hull of R on that side.

    For the right side the bicommutant acts on the right of E, so the product
    of matrices A, B is B A.
    """
    if side == LEFT:
        Qop = q_max_bicommutant(R.op, RIGHT)
        ring = Qop.ring.op
        q = RingExtension(R, ring, Qop.q.matrix).validate()
        return QuotientRing(ring, q, "left bicommutant", None, dict(Qop.data, side=LEFT))
    F = R.field
    E, emb = injective_hull_of_ring(R, RIGHT)
    n = E.dim
    Hs = hom_space(E, E, RIGHT)
    Hmats = [unvec(F, v, n, n) for v in Hs.vectors()]
    eye = F.eye(n)
    blocks = [kron(X.transpose(), eye) - kron(eye, X) for X in Hmats]
    C = kernel(vstack(F, blocks, cols=n * n))
    mats = [unvec(F, v, n, n) for v in C.vectors()]
    table = [[_vec_coords(C, mats[b] * mats[a]) for b in range(C.dim)] for a in range(C.dim)]
    unit = _vec_coords(C, eye)
    ring = Algebra(F, table, unit, labels=[f"b{k}" for k in range(C.dim)], name="bicommutant")
    qcols = [_vec_coords(C, E.ract[r]) for r in range(R.dim)]
    q = RingExtension(R, ring, hstack(F, qcols, rows=C.dim)).validate()
    return QuotientRing(ring, q, "bicommutant", None,
                        {"hull": E, "embedding": emb, "space": C, "mats": mats, "side": RIGHT})


def bicommutant_to_hom(R: Algebra, B: QuotientRing, Q: QuotientRing) -> Mat | None:
    """Iso from the bicommutant ring to Hom(D, R): X -> (d -> theta^-1((theta(1) X) d)).

    Returns the matrix of the ring isomorphism commuting with the maps from R,
    or None when the two descriptions disagree.
    """
    side = B.data["side"]
    if side == LEFT:
        Bop = QuotientRing(B.ring.op, RingExtension(R.op, B.ring.op, B.q.matrix), "", None,
                           dict(B.data, side=RIGHT))
        Qop = QuotientRing(Q.ring.op, RingExtension(R.op, Q.ring.op, Q.q.matrix), "", None,
                           dict(Q.data, side=RIGHT))
        return bicommutant_to_hom(R.op, Bop, Qop)
    if B.dim != Q.dim:
        return None
    F = R.field
    E, emb = B.data["hull"], B.data["embedding"]
    theta = emb.matrix
    one = theta * R.unit
    H, D = Q.data["hom"], Q.data["ideal"]
    if Q.data["projection"].nrows() != R.dim:
        return None  # R has torsion; not the Lambek situation
    cols = []
    for X in B.data["mats"]:
        x = X * one
        vals = []
        for d in D.vectors():
            y = solve(theta, E.right(d) * x)
            if y is None:
                return None
            vals.append(y)
        Phi = hstack(F, vals, rows=R.dim)
        v = vec(Phi)
        if not H.contains(v):
            return None
        cols.append(H.coords(v))
    P = hstack(F, cols, rows=Q.dim)
    if rank(P) != Q.dim:
        return None
    if P * B.q.matrix != Q.q.matrix:
        return None
    if not RingExtension(B.ring, Q.ring, P).is_injective:
        return None
    try:
        RingExtension(B.ring, Q.ring, P).validate()
    except Exception:
        return None
    return P


# ---------------------------------------------------------------------------
# symmetric


@dataclass(frozen=True, eq=False)
class SymmetricModuleOfQuotients:
    module: Bimodule
    q: BimoduleMap
    pairs: Subspace
    torsion: Subspace
    quotient: Bimodule  # M / symmetric torsion
    projection: Mat
    left_ideal: Subspace
    right_ideal: Subspace
    iterations: int

    def split(self, v: Mat) -> tuple[Mat, Mat]:
        """(F, G) matrices of the pair with coordinates v."""
        F = self.quotient.field
        w = self.pairs.matrix() * v
        m = self.quotient.dim
        a, b = self.left_ideal.dim, self.right_ideal.dim
        e = entries(w)
        Fv = F.mat(m * a, 1, e[: m * a])
        Gv = F.mat(m * b, 1, e[m * a:])
        return unvec(F, Fv, m, a), unvec(F, Gv, m, b)

    def join(self, X: Mat, Y: Mat) -> Mat:
        """Pair coordinates of (X, Y)."""
        w = vstack(self.quotient.field, [vec(X), vec(Y)])
        if not self.pairs.contains(w):
            raise EngineError("not a compatible pair")
        return self.pairs.coords(w)


def _pair_system(R: Algebra, Mbar: Bimodule, I0: Subspace, J0: Subspace) -> Mat:
    F = R.field
    m, a, b = Mbar.dim, I0.dim, J0.dim
    nF, nG = m * a, m * b
    blocks = []
    Im = F.eye(m)
    for g in R.generators:
        r = R.basis(g)
        # f left linear: f(r i) = r f(i)
        Lr = _ideal_mult(R, I0, LEFT, r)
        blk = kron(Lr.transpose(), Im) - kron(F.eye(a), Mbar.lact[g])
        blocks.append(hstack(F, [blk, F.mat(nF, nG)]))
        # g right linear: g(j r) = g(j) r
        Rr = _ideal_mult(R, J0, RIGHT, r)
        blk = kron(Rr.transpose(), Im) - kron(F.eye(b), Mbar.ract[g])
        blocks.append(hstack(F, [F.mat(nG, nF), blk]))
    # compatibility f(i) j = i g(j)
    Iv, Jv = I0.vectors(), J0.vectors()
    for ia, i in enumerate(Iv):
        Li = Mbar.left(i)
        for jb, j in enumerate(Jv):
            Rj = Mbar.right(j)
            row = F.mat(m, nF + nG)
            for s in range(m):
                for t in range(m):
                    if Rj[s, t] != 0:
                        row[s, ia * m + t] = Rj[s, t]
                    if Li[s, t] != 0:
                        row[s, nF + jb * m + t] = -Li[s, t]
            blocks.append(row)
    return vstack(F, blocks, cols=nF + nG)


def _sym_one_step(M: Bimodule, h: FilterHandle) -> SymmetricModuleOfQuotients:
    R = h.ring
    F = R.field
    if not (M.left_ring.same_as(R) and M.right_ring.same_as(R)):
        raise UsageError("symmetric module of quotients needs an R-R bimodule")
    I0, J0 = h.min_left.space, h.min_right.space
    t = torsion_subspace(M, h)
    Mbar, proj = quotient_module(M, t)
    P = kernel(_pair_system(R, Mbar, I0, J0))
    m = Mbar.dim
    tmp = SymmetricModuleOfQuotients(None, None, P, t, Mbar, proj, I0, J0, 1)
    pairs = [tmp.split(F.unit_vector(P.dim, k)) for k in range(P.dim)]

    def act(transform) -> Mat:
        return hstack(F, [tmp.join(*transform(X, Y)) for X, Y in pairs], rows=P.dim)

    lact, ract = [], []
    for r in range(R.dim):
        rv = R.basis(r)
        RrI = _ideal_mult(R, I0, RIGHT, rv)
        LrJ = _ideal_mult(R, J0, LEFT, rv)
        lact.append(act(lambda X, Y, RrI=RrI, r=r: (X * RrI, Mbar.lact[r] * Y)))
        ract.append(act(lambda X, Y, LrJ=LrJ, r=r: (Mbar.ract[r] * X, Y * LrJ)))
    N = Bimodule(R, R, P.dim, tuple(lact), tuple(ract), name=f"{M.name}_sym")
    cols = []
    for j in range(M.dim):
        mv = proj * F.unit_vector(M.dim, j)
        X = hstack(F, [Mbar.left(i) * mv for i in I0.vectors()], rows=m)
        Y = hstack(F, [Mbar.right(jj) * mv for jj in J0.vectors()], rows=m)
        cols.append(tmp.join(X, Y))
    q = BimoduleMap(M, N, hstack(F, cols, rows=P.dim))
    return SymmetricModuleOfQuotients(N, q, P, t, Mbar, proj, I0, J0, 1)


def symmetric_module_of_quotients(M: Bimodule, h: FilterHandle,
                                  max_iter: int | None = None) -> SymmetricModuleOfQuotients:
    if h.side != SYMMETRIC:
        raise UsageError("symmetric_module_of_quotients needs a symmetric handle")
    cur = _sym_one_step(M, h)
    base = cur
    limit = max_iter if max_iter is not None else 2 * (M.dim + h.ring.dim) + 2
    it = 1
    while True:
        nxt = _sym_one_step(cur.module, h)
        if rank(nxt.q.matrix) == nxt.module.dim == cur.module.dim:
            break
        it += 1
        if it > limit:
            raise EngineError("symmetric module of quotients did not stabilise")
        cur = SymmetricModuleOfQuotients(
            nxt.module, BimoduleMap(M, nxt.module, nxt.q.matrix * cur.q.matrix), nxt.pairs,
            base.torsion, nxt.quotient, nxt.projection, base.left_ideal, base.right_ideal, it)
    return cur


def symmetric_ring_of_quotients(h: FilterHandle) -> QuotientRing:
    """The ring of compatible pairs of R for a symmetric handle."""
    R = h.ring
    F = R.field
    S = _sym_one_step(regular_bimodule(R), h)
    proj = S.projection
    I0, J0 = S.left_ideal, S.right_ideal
    piI = _projected_basis(proj, I0)
    piJ = _projected_basis(proj, J0)
    pairs = [S.split(F.unit_vector(S.pairs.dim, k)) for k in range(S.pairs.dim)]
    liftsI = [_lift(piI, X) for X, _ in pairs]
    liftsJ = [_lift(piJ, Y) for _, Y in pairs]
    n = len(pairs)
    table = [[S.join(pairs[c][0] * liftsI[a], pairs[a][1] * liftsJ[c]) for c in range(n)]
             for a in range(n)]
    unit = S.join(piI, piJ)
    ring = Algebra(F, table, unit, labels=[f"s{k}" for k in range(n)], name=f"Qsym_{h.name}")
    q = RingExtension(R, ring, S.q.matrix).validate()
    return QuotientRing(ring, q, f"symmetric {h.name}", h, {"pairs": S})


def q_max_symmetric(R: Algebra, cross_check: bool = True) -> QuotientRing:
    h = lambek_filter(R, SYMMETRIC)
    Q = symmetric_ring_of_quotients(h)
    Q = QuotientRing(Q.ring, Q.q, "qsigmamax", h, Q.data)
    if cross_check:
        Qr = q_max(R, RIGHT, cross_route=False)
        emb = symmetric_into_right(Q, Qr)
        sub = symmetric_subring_of_qmax(R, Qr, h)
        if Subspace.column_space(emb.matrix) != sub:
            raise EngineError("Q_max^sigma: pair construction and subring description disagree")
        Q.data["right_embedding"] = emb
    return Q


def symmetric_into_right(Qs: QuotientRing, Qr: QuotientRing) -> RingExtension:
    """(f, g) -> g, into the right quotient ring built on the same J0."""
    S: SymmetricModuleOfQuotients = Qs.data["pairs"]
    H = Qr.data["hom"]
    if Qr.data["ideal"] != S.right_ideal:
        raise UsageError("right quotient built on a different ideal")
    F = Qs.ring.field
    cols = []
    for k in range(S.pairs.dim):
        _, Y = S.split(F.unit_vector(S.pairs.dim, k))
        Y = _rebase(Y, S.projection, Qr.data["projection"])
        cols.append(_vec_coords(H, Y))
    ext = RingExtension(Qs.ring, Qr.ring, hstack(F, cols, rows=Qr.dim)).validate(injective=True)
    if ext.matrix * Qs.q.matrix != Qr.q.matrix:
        raise EngineError("embedding does not commute with the maps from R")
    return ext


def symmetric_into_left(Qs: QuotientRing, Ql: QuotientRing) -> RingExtension:
    """(f, g) -> f, into the left quotient ring built on the same I0."""
    S: SymmetricModuleOfQuotients = Qs.data["pairs"]
    H = Ql.data["hom"]
    if Ql.data["ideal"] != S.left_ideal:
        raise UsageError("left quotient built on a different ideal")
    F = Qs.ring.field
    cols = []
    for k in range(S.pairs.dim):
        X, _ = S.split(F.unit_vector(S.pairs.dim, k))
        X = _rebase(X, S.projection, Ql.data["projection"])
        cols.append(_vec_coords(H, X))
    ext = RingExtension(Qs.ring, Ql.ring, hstack(F, cols, rows=Ql.dim)).validate(injective=True)
    if ext.matrix * Qs.q.matrix != Ql.q.matrix:
        raise EngineError("embedding does not commute with the maps from R")
    return ext


def _rebase(X: Mat, proj_from: Mat, proj_to: Mat) -> Mat:
    """Re-express hom values from one quotient of R in another (both of R)."""
    if proj_from == proj_to:
        return X
    if proj_from.nrows() == proj_from.ncols():
        return proj_to * X
    raise UsageError("cannot compare quotients of R by different torsion")


def symmetric_subring_of_qmax(R: Algebra, Qr: QuotientRing, h: FilterHandle) -> Subspace:
    """{q in Q_max : q(i) q in q(R) for i in I0, q q(j) in q(R) for j in J0}."""
    F = R.field
    Q = Qr.ring
    img = Qr.image
    rows = []
    Qm = img.quotient_matrix()
    for i in h.min_left.vectors():
        rows.append(Qm * Q.lmat(Qr.q(i)))
    for j in h.min_right.vectors():
        rows.append(Qm * Q.rmat(Qr.q(j)))
    if not rows or Qm.nrows() == 0:
        return Q.full
    return kernel(vstack(F, rows, cols=Q.dim))


# ---------------------------------------------------------------------------
# Q1-Q4 and Theta


@dataclass
class Q14Report:
    q1: bool
    q2: bool
    q3: bool
    q4: bool

    @property
    def all(self) -> bool:
        return self.q1 and self.q2 and self.q3 and self.q4

    def failing(self) -> list[str]:
        return [n for n, v in zip(("Q1", "Q2", "Q3", "Q4"), (self.q1, self.q2, self.q3, self.q4)) if not v]


def check_Q1_Q4(M: Bimodule, left: FilterHandle, right: FilterHandle) -> Q14Report:
    """Q1/Q2 torsion-freeness; Q3: M J0 <= J0 M; Q4: I0 M <= M I0 (cofinal ideals suffice)."""
    I0, J0 = left.min_ideal.space, right.min_ideal.space
    full = M.full()
    q1 = torsion_subspace(M, right).dim == 0
    q2 = torsion_subspace(M, left).dim == 0
    q3 = ideal_times_module(M, J0, full).contains_space(module_times_ideal(M, full, J0))
    q4 = module_times_ideal(M, full, I0).contains_space(ideal_times_module(M, I0, full))
    return Q14Report(q1, q2, q3, q4)


@dataclass(frozen=True, eq=False)
class ThetaResult:
    map: Mat
    source: Bimodule
    target: Bimodule
    injective: bool
    surjective: bool

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective


def _quotient_actions(Qs: QuotientRing, SM: SymmetricModuleOfQuotients):
    """Matrices of s . - and - . s on the pairs of M, for basis elements s of the quotient ring."""
    R = Qs.source
    F = R.field
    SR: SymmetricModuleOfQuotients = Qs.data["pairs"]
    I0, J0 = SM.left_ideal, SM.right_ideal
    Mbar = SM.quotient
    m, a, b = Mbar.dim, I0.dim, J0.dim
    piI = _projected_basis(SR.projection, I0)
    piJ = _projected_basis(SR.projection, J0)
    sys_full = _pair_system(R, Mbar, I0, J0)
    nF = m * a
    Fcols = list(range(nF))
    Gcols = list(range(nF, nF + m * b))
    A_F = _columns(sys_full, Fcols)
    A_G = _columns(sys_full, Gcols)
    if kernel(A_F).dim or kernel(A_G).dim:
        raise PreconditionError("partner component of a pair is not unique (Q1/Q2 fail)")
    mpairs = [SM.split(F.unit_vector(SM.pairs.dim, k)) for k in range(SM.pairs.dim)]
    left_mats, right_mats = [], []
    for k in range(Qs.dim):
        Xs, Ys = SR.split(F.unit_vector(SR.pairs.dim, k))
        LX = _lift(piI, Xs)
        LY = _lift(piJ, Ys)
        lc, rc = [], []
        for Xm, Ym in mpairs:
            # s . m : f-part is f_m o f_s, g-part solved
            Xn = Xm * LX
            rhs = -(A_F * vec(Xn))
            y = solve(A_G, rhs)
            if y is None:
                raise PreconditionError("s.m has no compatible partner (Q3/Q4 fail)")
            lc.append(SM.join(Xn, unvec(F, y, m, b)))
            # m . s : g-part is g_m o g_s, f-part solved
            Yn = Ym * LY
            rhs = -(A_G * vec(Yn))
            x = solve(A_F, rhs)
            if x is None:
                raise PreconditionError("m.s has no compatible partner (Q3/Q4 fail)")
            rc.append(SM.join(unvec(F, x, m, a), Yn))
        left_mats.append(hstack(F, lc, rows=SM.pairs.dim))
        right_mats.append(hstack(F, rc, rows=SM.pairs.dim))
    return left_mats, right_mats


def _columns(A: Mat, cols: Sequence[int]) -> Mat:
    from .linalg import field_of

    F = field_of(A)
    return F.mat(A.nrows(), len(cols), [A[i, j] for i in range(A.nrows()) for j in cols])


def theta_map(M: Bimodule, Qs: QuotientRing) -> ThetaResult:
    """Theta_M : S (x)_R M (x)_R S -> _lM_r, s (x) m (x) t -> s q_M(m) t."""
    h = Qs.handle
    if h is None or h.side != SYMMETRIC:
        raise UsageError("theta_map needs a symmetric quotient ring")
    rep = check_Q1_Q4(M, h.left_handle, h.right_handle)
    if not rep.all:
        raise PreconditionError(f"theta_map: {', '.join(rep.failing())} fail")
    R = h.ring
    F = R.field
    SM = symmetric_module_of_quotients(M, h)
    if SM.iterations != 1:
        raise PreconditionError("module of quotients needed more than one step")
    lm, rm = _quotient_actions(Qs, SM)
    n = Qs.dim
    S_bi = regular_bimodule(Qs.ring)
    from .bimodules import restrict

    S_SR = restrict(S_bi, None, Qs.q)
    S_RS = restrict(S_bi, Qs.q, None)
    T1 = tensor_over(S_SR, M)
    T2 = tensor_over(T1.module, S_RS)
    # Theta on the k-tensor basis ((a * dimM + b) * n + c)
    cols = []
    for a in range(n):
        for b_ in range(M.dim):
            qm = SM.q.matrix * F.unit_vector(M.dim, b_)
            left = lm[a] * qm
            for c in range(n):
                cols.append(rm[c] * left)
    Th_k = hstack(F, cols, rows=SM.pairs.dim)
    P = T2.projection * kron(T1.projection, F.eye(n))
    lift = kron(T1.lift(), F.eye(n)) * T2.lift()
    Th = Th_k * lift
    if Th * P != Th_k:
        raise EngineError("Theta is not balanced over R")
    target = SM.module
    return ThetaResult(Th, T2.module, target, kernel(Th).dim == 0, rank(Th) == target.dim)


# ---------------------------------------------------------------------------
# certification


def certify(Q: QuotientRing) -> dict:
    A = Q.ring
    return {
        "dim": A.dim,
        "simple": is_simple(A),
        "center_dim": A.center.dim,
        "label": certify_matrix_algebra(A),
    }
