"""Descending construction of the total rings of quotients.

Given R -> S, Morita's stage S' keeps the s whose colon ideals still
generate S:

    right:      (sr : R) S = S          for all r
    left:       S (R : rs) = S          for all r
    symmetric:  both

The families F_r = {J : (r : J) S = S for all r} and its left mirror are
Gabriel filters; a two-sided K lies in F_r iff f(K) S = S.  With J0 the
least such idempotent ideal, S'_r = {s : s f(J0) in f(R)}, a linear
condition.  Stages are iterated until S' = S; dimension drops strictly in
between, so at most dim S steps are needed.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .algebra import LEFT, RIGHT, Algebra, Ideal, RingExtension
from .errors import EngineError, UnsupportedConfiguration, UsageError
from .linalg import Subspace, hstack, kernel, vstack
from .perfectness import is_flat, is_ring_epi
from .quotients import QuotientRing, q_max, q_max_symmetric, symmetric_into_left, symmetric_into_right
from .torsion import SYMMETRIC, tensoring_filter_min

#: exhaustive membership validation runs when |S/f(R)| * |R| stays below this
EXHAUSTIVE_PAIRS = 1 << 13


def _img(ext: RingExtension, I: Ideal) -> Subspace:
    S = ext.target
    return Subspace.span(S.field, S.dim, [ext(v) for v in I.vectors()])


def _lands_in_image(ext: RingExtension, fI: Subspace, side: str) -> Subspace:
    """{s : s fI in f(R)} (side RIGHT) or {s : fI s in f(R)} (side LEFT)."""
    S = ext.target
    F = S.field
    Qm = ext.image.quotient_matrix()
    if Qm.nrows() == 0 or fI.dim == 0:
        return S.full
    rows = [Qm * (S.rmat(v) if side == RIGHT else S.lmat(v)) for v in fI.vectors()]
    return kernel(vstack(F, rows, cols=S.dim))


def _colon_generates(ext: RingExtension, s, r, side: str) -> bool:
    """Membership condition of s for one r, straight from the definition."""
    R, S = ext.source, ext.target
    F = S.field
    Qm = ext.image.quotient_matrix()
    fR = ext.matrix
    if side == RIGHT:
        x = S.mul(s, ext(r))  # (x : R) = {t : x f(t) in f(R)}
        K = kernel(Qm * S.lmat(x) * fR) if Qm.nrows() else R.full
        fK = Subspace.span(F, S.dim, [fR * k for k in K.vectors()])
        return S.span_products(fK, S.full).dim == S.dim
    x = S.mul(ext(r), s)
    K = kernel(Qm * S.rmat(x) * fR) if Qm.nrows() else R.full
    fK = Subspace.span(F, S.dim, [fR * k for k in K.vectors()])
    return S.span_products(S.full, fK).dim == S.dim


def _one_sided_prime(ext: RingExtension, side: str) -> tuple[Subspace, Ideal | None]:
    K = tensoring_filter_min(ext, side)
    if K is None:
        return None, None
    # right condition s f(J0) in f(R) uses right multiplication by f(J0)
    return _lands_in_image(ext, _img(ext, K), side), K


def _exhaustive_prime(ext: RingExtension, side: str) -> Subspace:
    """S' by direct membership over all s mod f(R) and all r (finite fields only)."""
    S, R = ext.target, ext.source
    F = S.field
    comp = ext.image.complement_indices()
    members = [v for v in ext.image.vectors()]
    for coeffs in F.vectors(len(comp)):
        s = F.mat(S.dim, 1)
        for c, j in zip(coeffs.entries(), comp):
            if c != 0:
                s = s + F.unit_vector(S.dim, j) * c
        if all(_colon_generates(ext, s, r, side) for r in R.elements()):
            members.append(s)
    return Subspace.span(F, S.dim, members)


def _can_exhaust(ext: RingExtension) -> bool:
    F = ext.target.field
    if not F.is_finite:
        return False
    n = len(ext.image.complement_indices())
    return F.p ** (n + ext.source.dim) <= EXHAUSTIVE_PAIRS


@dataclass(frozen=True)
class PrimeResult:
    space: Subspace
    left_ideal: Ideal | None
    right_ideal: Ideal | None
    exhaustive_checked: bool


def s_prime(ext: RingExtension, mode: str, validate: bool | None = None) -> PrimeResult:
    """S' for mode right, left or symmetric, as a subspace of S."""
    if mode not in (RIGHT, LEFT, SYMMETRIC):
        raise UsageError(f"unknown descent mode {mode!r}")
    S = ext.target
    sides = {RIGHT: (RIGHT,), LEFT: (LEFT,), SYMMETRIC: (LEFT, RIGHT)}[mode]
    space = S.full
    ideals = {}
    for side in sides:
        U, K = _one_sided_prime(ext, side)
        if U is None:
            if not _can_exhaust(ext):
                raise UnsupportedConfiguration(
                    f"no least ideal for the {side} Morita filter; exhaustive membership unavailable")
            U = _exhaustive_prime(ext, side)
        ideals[side] = K
        space = space & U
    if validate is None:
        validate = _can_exhaust(ext)
    if validate:
        ex = S.full
        for side in sides:
            ex = ex & _exhaustive_prime(ext, side)
        if ex != space:
            raise EngineError(f"S' ({mode}): linearised and exhaustive membership disagree")
    if not S.is_subalgebra(space) or not space.contains_space(ext.image):
        raise EngineError("S' is not a subring containing R")
    return PrimeResult(space, ideals.get(LEFT), ideals.get(RIGHT), validate)


def s_prime_right(ext: RingExtension, **kw) -> Subspace:
    return s_prime(ext, RIGHT, **kw).space


def s_prime_left(ext: RingExtension, **kw) -> Subspace:
    return s_prime(ext, LEFT, **kw).space


def s_prime_symmetric(ext: RingExtension, **kw) -> Subspace:
    return s_prime(ext, SYMMETRIC, **kw).space


# ---------------------------------------------------------------------------
# iteration


@dataclass(frozen=True)
class DescentTrace:
    ambient: RingExtension
    mode: str
    stages: tuple  # Subspaces of the ambient target
    fixpoint: Algebra
    fixpoint_map: RingExtension  # R -> fixpoint
    inclusion: RingExtension  # fixpoint -> ambient
    certificate: dict = dc_field(default_factory=dict, compare=False)

    @property
    def dims(self) -> list[int]:
        return [U.dim for U in self.stages]

    @property
    def stage_count(self) -> int:
        return len(self.stages)

    @property
    def strictly_decreasing(self) -> bool:
        d = self.dims
        return all(a > b for a, b in zip(d[:-2], d[1:-1])) and (len(d) < 2 or d[-1] == d[-2])


def _restrict_ext(ambient: RingExtension, U: Subspace) -> tuple[Algebra, RingExtension, RingExtension]:
    """Subalgebra on U, the map R -> U and the inclusion U -> ambient."""
    S = ambient.target
    T, inc = S.subalgebra(U, name=f"{S.name}'")
    F = S.field
    cols = [U.coords(ambient(ambient.source.basis(i))) for i in range(ambient.source.dim)]
    f = RingExtension(ambient.source, T, hstack(F, cols, rows=U.dim)).validate()
    return T, f, inc


def certify_fixpoint(ext: RingExtension, mode: str) -> dict:
    epi = is_ring_epi(ext)
    out = {"epi": epi.ok}
    if mode in (RIGHT, SYMMETRIC):
        out["left_flat"] = is_flat(ext, LEFT).ok
    if mode in (LEFT, SYMMETRIC):
        out["right_flat"] = is_flat(ext, RIGHT).ok
    out["ok"] = all(out.values())
    return out


def descend(ambient: RingExtension, mode: str, validate: bool | None = None) -> DescentTrace:
    """Iterate S' from the ambient until it stabilises; certify the fixpoint."""
    S = ambient.target
    cur_space = S.full
    cur_ext = ambient
    inc = RingExtension.identity(S)
    stages = [cur_space]
    for _ in range(S.dim + 1):
        P = s_prime(cur_ext, mode, validate)
        # P lives in the current stage; push it to the ambient
        new_space = Subspace.span(S.field, S.dim, [inc.matrix * v for v in P.space.vectors()])
        stages.append(new_space)
        if new_space.dim == cur_space.dim:
            break
        if new_space.dim > cur_space.dim or not cur_space.contains_space(new_space):
            raise EngineError("descent stage grew")
        cur_space = new_space
        T, cur_ext, inc = _restrict_ext(ambient, cur_space)
    else:
        raise EngineError("descent did not stabilise within dim S steps")
    if cur_ext is ambient:
        T = S
    cert = certify_fixpoint(cur_ext, mode)
    trace = DescentTrace(ambient, mode, tuple(stages), T, cur_ext, inc, cert)
    if not cert["ok"]:
        raise EngineError(f"descent fixpoint fails certification: dims {trace.dims}, {cert}")
    return trace


# ---------------------------------------------------------------------------
# total rings of quotients


def _ambient(R: Algebra, mode: str) -> QuotientRing:
    if mode == RIGHT:
        return q_max(R, RIGHT)
    if mode == LEFT:
        return q_max(R, LEFT)
    return q_max_symmetric(R)


def q_tot(R: Algebra, mode: str = RIGHT, cross_check: bool = True,
          ambient: QuotientRing | None = None) -> QuotientRing:
    """Q_tot (right), Q_tot^l (left) or Q_tot^sigma (symmetric) by descent."""
    if mode not in (RIGHT, LEFT, SYMMETRIC):
        raise UsageError(f"unknown mode {mode!r}")
    A = ambient if ambient is not None else _ambient(R, mode)
    trace = descend(A.q, mode)
    data = {"trace": trace, "ambient": A}
    if mode == SYMMETRIC and cross_check:
        Qr = q_max(R, RIGHT, cross_route=False)
        other = descend(Qr.q, SYMMETRIC)
        emb = symmetric_into_right(A, Qr)
        pushed = Subspace.span(R.field, Qr.dim, [emb.matrix * v for v in trace.stages[-1].vectors()])
        if pushed != other.stages[-1]:
            raise EngineError("symmetric descents from Q_max^sigma and Q_max disagree")
        data["cross_trace"] = other
        data["cross_ambient"] = Qr
    name = {RIGHT: "qtot", LEFT: "qltot", SYMMETRIC: "qsigmatot"}[mode]
    return QuotientRing(trace.fixpoint, trace.fixpoint_map, name, None, data)


@dataclass(frozen=True)
class ContainmentReport:
    in_right: bool
    in_left: bool
    dims: dict

    @property
    def ok(self) -> bool:
        return self.in_right and self.in_left


def total_containments(R: Algebra, qs: QuotientRing | None = None, qr: QuotientRing | None = None,
                       ql: QuotientRing | None = None) -> ContainmentReport:
    """image(Q_tot^sigma) inside Q_tot and inside Q_tot^l, in Q_max and Q_l_max."""
    Qs_amb = q_max_symmetric(R, cross_check=False)
    qs = qs or q_tot(R, SYMMETRIC, cross_check=False, ambient=Qs_amb)
    qr = qr or q_tot(R, RIGHT)
    ql = ql or q_tot(R, LEFT)
    amb_s = qs.data["ambient"]
    amb_r, amb_l = qr.data["ambient"], ql.data["ambient"]
    fix_s = qs.data["trace"].stages[-1]
    er = symmetric_into_right(amb_s, amb_r)
    el = symmetric_into_left(amb_s, amb_l)
    F = R.field
    img_r = Subspace.span(F, amb_r.dim, [er.matrix * v for v in fix_s.vectors()])
    img_l = Subspace.span(F, amb_l.dim, [el.matrix * v for v in fix_s.vectors()])
    in_r = qr.data["trace"].stages[-1].contains_space(img_r)
    in_l = ql.data["trace"].stages[-1].contains_space(img_l)
    return ContainmentReport(in_r, in_l, {"qsigmatot": qs.dim, "qtot": qr.dim, "qltot": ql.dim})
