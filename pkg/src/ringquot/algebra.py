"""Finite-dimensional unital associative algebras given by structure constants."""
from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Sequence

from flint import fmpq_poly, nmod_mat, nmod_poly

from .errors import EngineError, UnsupportedConfiguration, UsageError, ValidationError
from .linalg import (
    Field,
    Mat,
    Subspace,
    hstack,
    is_zero,
    kernel,
    rank,
    solve,
    vstack,
)

LEFT, RIGHT, TWO_SIDED = "left", "right", "two_sided"


class Algebra:
    """A unital associative algebra with basis e_0..e_{n-1}.

    ``table[i][j]`` is the coordinate vector of ``e_i * e_j``.  Elements are
    column vectors of length ``dim``.
    """

    def __init__(self, field: Field, table: Sequence[Sequence[Mat]], unit: Mat,
                 labels: Sequence[str] | None = None, name: str = "", check: bool = True):
        n = len(table)
        self.field = field
        self.dim = n
        self.table = [list(row) for row in table]
        self.unit = unit
        self.labels = list(labels) if labels is not None else [f"e{i}" for i in range(n)]
        self.name = name
        if len(self.labels) != n or unit.nrows() != n:
            raise UsageError("algebra: inconsistent dimensions")
        for row in self.table:
            if len(row) != n or any(v.nrows() != n for v in row):
                raise UsageError("algebra: structure constants must be n x n x n")
        # left_basis[i] v = e_i v ; right_basis[j] v = v e_j
        self.left_basis = [hstack(field, [self.table[i][j] for j in range(n)], rows=n) for i in range(n)]
        self.right_basis = [hstack(field, [self.table[i][j] for i in range(n)], rows=n) for j in range(n)]
        if check:
            self.validate()

    # -- construction helpers ------------------------------------------------
    @classmethod
    def from_constants(cls, field: Field, dim: int, constants, unit, labels=None, name=""):
        """Build from a dict {(i, j): {k: coeff}} or a dense c[i][j][k] array."""
        F = field
        table = []
        for i in range(dim):
            row = []
            for j in range(dim):
                if isinstance(constants, dict):
                    d = constants.get((i, j), {})
                    vals = [d.get(k, 0) for k in range(dim)]
                else:
                    vals = constants[i][j]
                row.append(F.vector(vals))
            table.append(row)
        u = unit if not isinstance(unit, (list, tuple)) else F.vector(unit)
        return cls(F, table, u, labels=labels, name=name)

    def validate(self):
        n = self.dim
        for i, j, k in itertools.product(range(n), repeat=3):
            lhs = self.mul(self.table[i][j], self.basis(k))
            rhs = self.left_basis[i] * self.table[j][k]
            if lhs != rhs:
                raise ValidationError(
                    f"not associative: (e{i} e{j}) e{k} != e{i} (e{j} e{k})")
        for i in range(n):
            e = self.basis(i)
            if self.mul(self.unit, e) != e or self.mul(e, self.unit) != e:
                raise ValidationError(f"unit law fails on e{i}")

    # -- arithmetic ----------------------------------------------------------
    def basis(self, i: int) -> Mat:
        return self.field.unit_vector(self.dim, i)

    @property
    def one(self) -> Mat:
        return self.unit

    def zero(self) -> Mat:
        return self.field.mat(self.dim, 1)

    def element(self, coeffs) -> Mat:
        return self.field.vector(coeffs)

    def lmat(self, u: Mat) -> Mat:
        """Matrix of x -> u x."""
        out = self.field.mat(self.dim, self.dim)
        for k, c in enumerate(u.entries()):
            if c != 0:
                out = out + self.left_basis[k] * c
        return out

    def rmat(self, u: Mat) -> Mat:
        """Matrix of x -> x u."""
        out = self.field.mat(self.dim, self.dim)
        for k, c in enumerate(u.entries()):
            if c != 0:
                out = out + self.right_basis[k] * c
        return out

    def mul(self, u: Mat, v: Mat) -> Mat:
        return self.lmat(u) * v

    def power(self, u: Mat, k: int) -> Mat:
        out = self.unit
        for _ in range(k):
            out = self.mul(out, u)
        return out

    def elements(self):
        return self.field.vectors(self.dim)

    def __repr__(self):
        nm = f" {self.name}" if self.name else ""
        return f"<Algebra{nm} dim={self.dim} over {self.field.name}>"

    # -- structure -----------------------------------------------------------
    @cached_property
    def is_commutative(self) -> bool:
        return all(self.table[i][j] == self.table[j][i]
                   for i in range(self.dim) for j in range(i + 1, self.dim))

    @cached_property
    def center(self) -> Subspace:
        blocks = [self.left_basis[i] - self.right_basis[i] for i in range(self.dim)]
        return kernel(vstack(self.field, blocks))

    def span_products(self, U: Subspace, W: Subspace) -> Subspace:
        vecs = [self.mul(u, w) for u in U.vectors() for w in W.vectors()]
        return Subspace.span(self.field, self.dim, vecs)

    @cached_property
    def full(self) -> Subspace:
        return Subspace.full(self.field, self.dim)

    def is_subalgebra(self, U: Subspace) -> bool:
        return U.contains(self.unit) and U.contains_space(self.span_products(U, U))

    def subalgebra(self, U: Subspace, name: str = "") -> tuple["Algebra", "RingExtension"]:
        """The subalgebra on U with its inclusion; U must be closed and unital."""
        if not U.contains(self.unit):
            raise ValidationError("subspace does not contain the identity")
        vs = U.vectors()
        table = []
        for a in vs:
            row = []
            for b in vs:
                p = self.mul(a, b)
                if not U.contains(p):
                    raise ValidationError("subspace is not closed under multiplication")
                row.append(U.coords(p))
            table.append(row)
        labels = [vector_label(self, v) for v in vs]
        sub = Algebra(self.field, table, U.coords(self.unit), labels=labels, name=name)
        return sub, RingExtension(sub, self, U.matrix())

    @cached_property
    def generators(self) -> list[int]:
        """Basis indices generating the algebra; enough to test intertwining."""
        gens: list[int] = []
        cur = Subspace.span(self.field, self.dim, [self.unit])
        for i in range(self.dim):
            if not cur.contains(self.basis(i)):
                gens.append(i)
                cur = close_under_mats(cur + Subspace.span(self.field, self.dim, [self.basis(i)]),
                                       [self.left_basis[g] for g in gens])
        return gens

    @cached_property
    def op(self) -> "Algebra":
        """The opposite algebra; ``A.op.op is A``."""
        B = opposite(self)
        B.__dict__["op"] = self
        return B

    def same_as(self, other: "Algebra") -> bool:
        if self is other:
            return True
        return (self.field == other.field and self.dim == other.dim and self.unit == other.unit
                and all(self.table[i][j] == other.table[i][j]
                        for i in range(self.dim) for j in range(self.dim)))

    @cached_property
    def radical(self) -> "Ideal":
        return jacobson_radical(self)

    @cached_property
    def decomposition(self) -> "Decomposition":
        return decompose(self)

    def nilpotency_index(self, U: Subspace) -> int | None:
        """Smallest k with U^k = 0, or None if U is not nilpotent."""
        P = U
        for k in range(1, self.dim + 2):
            if P.dim == 0:
                return k
            P = self.span_products(P, U)
        return None


def vector_label(A: Algebra, v: Mat) -> str:
    out = ""
    for c, lab in zip(v.entries(), A.labels):
        if c == 0:
            continue
        s = A.field.fmt(c)
        neg = s.startswith("-")
        s = s.lstrip("-")
        term = lab if s == "1" else f"{s}*{lab}"
        out += ("-" if neg else ("+" if out else "")) + term
    return out or "0"


@dataclass(frozen=True, eq=False)
class RingExtension:
    """A unital ring homomorphism f: source -> target; ``matrix`` maps coordinates."""

    source: Algebra
    target: Algebra
    matrix: Mat

    def __post_init__(self):
        if self.matrix.nrows() != self.target.dim or self.matrix.ncols() != self.source.dim:
            raise UsageError("extension matrix has the wrong shape")

    def __call__(self, v: Mat) -> Mat:
        return self.matrix * v

    def validate(self, injective: bool = False):
        R, S = self.source, self.target
        for i in range(R.dim):
            for j in range(R.dim):
                if self(R.table[i][j]) != S.mul(self(R.basis(i)), self(R.basis(j))):
                    raise ValidationError(f"f(e{i} e{j}) != f(e{i}) f(e{j})")
        if self(R.unit) != S.unit:
            raise ValidationError("f(1) != 1")
        if injective and rank(self.matrix) != R.dim:
            raise ValidationError("extension is not injective")
        return self

    @property
    def is_injective(self) -> bool:
        return rank(self.matrix) == self.source.dim

    @cached_property
    def image(self) -> Subspace:
        return Subspace.column_space(self.matrix)

    def compose(self, other: "RingExtension") -> "RingExtension":
        """self after other."""
        return RingExtension(other.source, self.target, self.matrix * other.matrix)

    @classmethod
    def identity(cls, A: Algebra) -> "RingExtension":
        return cls(A, A, A.field.eye(A.dim))


# ---------------------------------------------------------------------------
# ideals


@dataclass(frozen=True, eq=False)
class Ideal:
    """A left, right or two-sided ideal of ``parent``."""

    parent: Algebra
    side: str
    space: Subspace

    def __eq__(self, other):
        return isinstance(other, Ideal) and other.parent is self.parent and other.space == self.space

    def __hash__(self):
        return hash(self.space)

    @property
    def dim(self) -> int:
        return self.space.dim

    def __repr__(self):
        return f"Ideal({self.side}, dim={self.dim} in {self.parent!r})"

    def vectors(self):
        return self.space.vectors()

    def contains(self, v: Mat) -> bool:
        return self.space.contains(v)

    def __le__(self, other: "Ideal") -> bool:
        return other.space.contains_space(self.space)

    @classmethod
    def generated(cls, A: Algebra, vectors, side: str) -> "Ideal":
        return cls(A, side, close_under(A, Subspace.span(A.field, A.dim, list(vectors)), side))

    @classmethod
    def whole(cls, A: Algebra, side: str = TWO_SIDED) -> "Ideal":
        return cls(A, side, A.full)

    @classmethod
    def zero(cls, A: Algebra, side: str = TWO_SIDED) -> "Ideal":
        return cls(A, side, Subspace.zero(A.field, A.dim))

    def is_closed(self) -> bool:
        return close_under(self.parent, self.space, self.side) == self.space

    def product(self, other: "Ideal") -> Subspace:
        return self.parent.span_products(self.space, other.space)

    def is_idempotent(self) -> bool:
        return self.product(self) == self.space


def close_under(A: Algebra, U: Subspace, side: str) -> Subspace:
    """Smallest subspace containing U closed under the given multiplications."""
    mats = []
    if side in (RIGHT, TWO_SIDED):
        mats += A.right_basis
    if side in (LEFT, TWO_SIDED):
        mats += A.left_basis
    if side not in (LEFT, RIGHT, TWO_SIDED):
        raise UsageError(f"unknown side {side!r}")
    return close_under_mats(U, mats)


def close_under_mats(U: Subspace, mats: Sequence[Mat]) -> Subspace:
    cur = U
    while True:
        vecs = cur.vectors()
        new = Subspace.span(cur.field, cur.ambient_dim, vecs + [M * v for M in mats for v in vecs])
        if new.dim == cur.dim:
            return cur
        cur = new


# ---------------------------------------------------------------------------
# constructors


@functools.lru_cache(maxsize=None)
def base_field(F: Field) -> Algebra:
    return Algebra(F, [[F.vector([1])]], F.vector([1]), labels=["1"], name=F.name)


def matrix_unit_labels(n: int) -> list[str]:
    return [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)]


def matrix_algebra(F: Field, n: int) -> Algebra:
    """M_n(F) with basis E_ij in row-major order."""
    if n < 1:
        raise UsageError("matrix_algebra needs n >= 1")
    N = n * n
    idx = lambda i, j: i * n + j
    table = [[F.mat(N, 1) for _ in range(N)] for _ in range(N)]
    for i, j, l in itertools.product(range(n), repeat=3):
        table[idx(i, j)][idx(j, l)][idx(i, l), 0] = F.one
    unit = F.vector([1 if i == j else 0 for i in range(n) for j in range(n)])
    return Algebra(F, table, unit, labels=matrix_unit_labels(n), name=f"M{n}({F.name})")


def _classes(n: int, cells, ties):
    parent = {}

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    for c in list(cells) + [x for t in ties for x in t]:
        i, j = c
        if not (1 <= i <= n and 1 <= j <= n):
            raise UsageError(f"cell {c} outside a {n}x{n} matrix")
        parent.setdefault((i, j), (i, j))
    for a, b in ties:
        ra, rb = find(tuple(a)), find(tuple(b))
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict = {}
    for c in parent:
        groups.setdefault(find(c), []).append(c)
    return [sorted(g) for _, g in sorted(groups.items())]


def matrix_pattern_algebra(F: Field, n: int, cells, ties=()) -> tuple[Algebra, RingExtension]:
    """Subalgebra of M_n given by free cells, with tied cells forced equal.

    Cells are 1-based (row, col).  Returns the abstract algebra and its
    inclusion into M_n(F).
    """
    M = matrix_algebra(F, n)
    groups = _classes(n, [tuple(c) for c in cells], [(tuple(a), tuple(b)) for a, b in ties])
    vecs = []
    for g in groups:
        v = F.mat(n * n, 1)
        for (i, j) in g:
            v[(i - 1) * n + (j - 1), 0] = F.one
        vecs.append(v)
    U = Subspace.span(F, n * n, vecs)
    if not U.contains(M.unit):
        raise ValidationError("pattern does not contain the identity matrix")
    for a in vecs:
        for b in vecs:
            if not U.contains(M.mul(a, b)):
                raise ValidationError(
                    f"pattern not closed: {vector_label(M, a)} * {vector_label(M, b)} leaves it")
    table = [[_group_coords(F, vecs, U, M.mul(a, b)) for b in vecs] for a in vecs]
    unit = _group_coords(F, vecs, U, M.unit)
    labels = ["+".join(f"E{i}{j}" for i, j in g) for g in groups]
    A = Algebra(F, table, unit, labels=labels, name="pattern")
    B = hstack(F, vecs, rows=n * n)
    return A, RingExtension(A, M, B).validate(injective=True)


def _group_coords(F, vecs, U, w):
    B = hstack(F, vecs, rows=w.nrows())
    x = solve(B, w)
    if x is None:
        raise ValidationError("product leaves the pattern")
    return x


@dataclass(frozen=True)
class QuiverDesc:
    vertices: tuple[str, ...]
    arrows: tuple[tuple[str, str, str], ...]  # (name, source, target)


@dataclass(frozen=True)
class PosetDesc:
    elements: tuple[str, ...]
    relations: tuple[tuple[str, str], ...]  # (x, y) meaning x <= y


def path_algebra(F: Field, q: QuiverDesc) -> Algebra:
    """Path algebra of an acyclic quiver; p*q is 'p then q' when target(p) = source(q)."""
    verts = list(q.vertices)
    vset = set(verts)
    for name, s, t in q.arrows:
        if s not in vset or t not in vset:
            raise ValidationError(f"arrow {name} uses an unknown vertex")
    # acyclicity by DFS
    out: dict = {v: [] for v in verts}
    for a in q.arrows:
        out[a[1]].append(a)
    state = {v: 0 for v in verts}

    def visit(v):
        state[v] = 1
        for _, _, t in out[v]:
            if state[t] == 1:
                raise ValidationError("quiver has an oriented cycle (infinite-dimensional path algebra)")
            if state[t] == 0:
                visit(t)
        state[v] = 2

    for v in verts:
        if state[v] == 0:
            visit(v)
    paths = [(v, v, ()) for v in verts]
    frontier = [(a[1], a[2], (a[0],)) for a in q.arrows]
    while frontier:
        paths.extend(frontier)
        nxt = []
        for s, t, arr in frontier:
            for a in out[t]:
                nxt.append((s, a[2], arr + (a[0],)))
        frontier = nxt
    index = {p: i for i, p in enumerate(paths)}
    n = len(paths)
    table = [[F.mat(n, 1) for _ in range(n)] for _ in range(n)]
    for (s1, t1, a1) in paths:
        for (s2, t2, a2) in paths:
            if t1 != s2:
                continue
            if not a1:
                prod = (s2, t2, a2)
            elif not a2:
                prod = (s1, t1, a1)
            else:
                prod = (s1, t2, a1 + a2)
            table[index[(s1, t1, a1)]][index[(s2, t2, a2)]][index[prod], 0] = F.one
    unit = F.vector([1 if not p[2] else 0 for p in paths])
    labels = [f"e{p[0]}" if not p[2] else "".join(p[2]) for p in paths]
    return Algebra(F, table, unit, labels=labels, name="path")


def incidence_algebra(F: Field, p: PosetDesc) -> Algebra:
    els = list(p.elements)
    eset = set(els)
    le = {(x, x) for x in els}
    for x, y in p.relations:
        if x not in eset or y not in eset:
            raise ValidationError(f"relation {x}<={y} uses an unknown element")
        le.add((x, y))
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(le), repeat=2):
            if b == c and (a, d) not in le:
                le.add((a, d))
                changed = True
    for a, b in le:
        if a != b and (b, a) in le:
            raise ValidationError(f"relation is not antisymmetric: {a} and {b}")
    order = {x: i for i, x in enumerate(els)}
    pairs = sorted(le, key=lambda t: (order[t[0]], order[t[1]]))
    index = {pr: i for i, pr in enumerate(pairs)}
    n = len(pairs)
    table = [[F.mat(n, 1) for _ in range(n)] for _ in range(n)]
    for (a, b) in pairs:
        for (c, d) in pairs:
            if b == c:
                table[index[(a, b)]][index[(c, d)]][index[(a, d)], 0] = F.one
    unit = F.vector([1 if a == b else 0 for a, b in pairs])
    labels = [f"({a},{b})" for a, b in pairs]
    return Algebra(F, table, unit, labels=labels, name="incidence")


def truncated_polynomial(F: Field, m: int) -> Algebra:
    """k[x]/(x^m) with basis 1, x, ..., x^{m-1}."""
    table = [[F.vector([1 if i + j == k else 0 for k in range(m)]) for j in range(m)] for i in range(m)]
    labels = ["1"] + [f"x^{i}" if i > 1 else "x" for i in range(1, m)]
    return Algebra(F, table, F.unit_vector(m, 0), labels=labels, name=f"k[x]/x^{m}")


def opposite(A: Algebra) -> Algebra:
    n = A.dim
    table = [[A.table[j][i] for j in range(n)] for i in range(n)]
    return Algebra(A.field, table, A.unit, labels=A.labels, name=f"{A.name}^op", check=False)


def tensor_algebra(A: Algebra, B: Algebra) -> Algebra:
    """A (x)_k B with basis a_i (x) b_j at index i * dim B + j."""
    F = A.field
    n, m = A.dim, B.dim
    N = n * m
    table = [[None] * N for _ in range(N)]
    for i1, j1, i2, j2 in itertools.product(range(n), range(m), range(n), range(m)):
        a = A.table[i1][i2].entries()
        b = B.table[j1][j2].entries()
        table[i1 * m + j1][i2 * m + j2] = F.vector([x * y for x in a for y in b])
    unit = F.vector([x * y for x in A.unit.entries() for y in B.unit.entries()])
    labels = [f"{x}(x){y}" for x in A.labels for y in B.labels]
    return Algebra(F, table, unit, labels=labels, name=f"{A.name}(x){B.name}", check=False)


def enveloping(A: Algebra) -> Algebra:
    """A (x)_k A^op."""
    return tensor_algebra(A, opposite(A))


def direct_product(*algs: Algebra) -> Algebra:
    F = algs[0].field
    N = sum(a.dim for a in algs)
    offs = list(itertools.accumulate([0] + [a.dim for a in algs]))
    table = [[F.mat(N, 1) for _ in range(N)] for _ in range(N)]
    unit = F.mat(N, 1)
    labels = []
    for t, A in enumerate(algs):
        o = offs[t]
        for i in range(A.dim):
            for j in range(A.dim):
                v = A.table[i][j]
                for k in range(A.dim):
                    table[o + i][o + j][o + k, 0] = v[k, 0]
            unit[o + i, 0] = A.unit[i, 0]
        labels += [f"{lab}[{t}]" for lab in A.labels]
    return Algebra(F, table, unit, labels=labels, name="x".join(a.name or "A" for a in algs))


# ---------------------------------------------------------------------------
# Jacobson radical


def _trace(M: Mat):
    F_entries = M.entries()
    n = M.nrows()
    return sum((F_entries[i * n + i] for i in range(n)), start=0 * F_entries[0]) if n else 0


def jacobson_radical(A: Algebra) -> Ideal:
    """The largest nilpotent two-sided ideal.

    Characteristic 0: kernel of the trace form (x, y) -> Tr(L_{xy}).
    Characteristic p: the descending chain of p-adically lifted trace
    functionals g_i(x) = (Tr(L_x^{p^i}) mod p^{i+1}) / p^i, stopping at
    i = floor(log_p n).
    """
    F = A.field
    n = A.dim
    if F.p is None:
        G = F.mat(n, n, [_trace(A.left_basis[i] * A.left_basis[j]) for i in range(n) for j in range(n)])
        J = kernel(G)
    else:
        p = F.p
        l = 0
        while p ** (l + 1) <= n:
            l += 1
        J = A.full
        for i in range(l + 1):
            mod = p ** (i + 1)
            q = p ** i
            cur = J.vectors()
            if not cur:
                break
            rows = []
            for k in range(n):
                row = []
                for a in cur:
                    z = A.mul(a, A.basis(k))
                    L = A.lmat(z)
                    Z = nmod_mat(n, n, [int(x) for x in L.entries()], mod)
                    P = _matpow(Z, q)
                    t = sum(int(P[r, r]) for r in range(n)) % mod
                    if t % q:
                        raise EngineError("trace functional not divisible; radical chain broken")
                    row.append(t // q)
                rows.append(row)
            coeffs = kernel(F.matrix(rows))
            Bc = J.matrix()
            J = Subspace.span(F, n, [Bc * c for c in coeffs.vectors()])
    rad = Ideal(A, TWO_SIDED, J)
    if A.nilpotency_index(J) is None:
        raise EngineError("computed radical is not nilpotent")
    if not rad.is_closed():
        raise EngineError("computed radical is not an ideal")
    return rad


def _matpow(M, e: int):
    n = M.nrows()
    out = nmod_mat(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)], M.modulus())
    base = M
    while e:
        if e & 1:
            out = out * base
        base = base * base
        e >>= 1
    return out


# ---------------------------------------------------------------------------
# primitive idempotents


@dataclass
class Decomposition:
    """A complete set of orthogonal primitive idempotents, grouped by iso class.

    ``classes[c]`` lists indices into ``idempotents`` whose right ideals e A
    are isomorphic; ``division_dims[c]`` is dim_k of e A e / e J e.
    """

    idempotents: list
    classes: list = dc_field(default_factory=list)
    division_dims: list = dc_field(default_factory=list)

    def representative(self, c: int):
        return self.idempotents[self.classes[c][0]]

    @property
    def class_count(self) -> int:
        return len(self.classes)


def corner(A: Algebra, e: Mat, f: Mat | None = None) -> Subspace:
    """e A f as a subspace of A."""
    f = e if f is None else f
    Le, Rf = A.lmat(e), A.rmat(f)
    return Subspace.span(A.field, A.dim, [Le * (Rf * A.basis(k)) for k in range(A.dim)])


def min_poly(A: Algebra, a: Mat, e: Mat) -> list:
    """Coefficients (low to high, monic) of the minimal polynomial of a in eAe."""
    F = A.field
    powers = [e]
    La = A.lmat(a)
    while True:
        nxt = La * powers[-1]
        B = hstack(F, powers, rows=A.dim)
        x = solve(B, nxt)
        if x is not None:
            return [-c for c in x.entries()] + [F.one]
        powers.append(nxt)
        if len(powers) > A.dim + 1:
            raise EngineError("minimal polynomial degree exceeds dimension")


def _poly(F: Field, coeffs):
    if F.p is None:
        return fmpq_poly([c for c in coeffs])
    return nmod_poly([int(c) for c in coeffs], F.p)


def _poly_coeffs(F: Field, poly) -> list:
    return [F(c) for c in poly.coeffs()]


def _eval_poly(A: Algebra, coeffs, a: Mat, e: Mat) -> Mat:
    out = A.zero()
    p = e
    La = A.lmat(a)
    for c in coeffs:
        if c != 0:
            out = out + p * c
        p = La * p
    return out


def _try_split(A: Algebra, a: Mat, e: Mat):
    """Split e using the primary decomposition of k[a] inside eAe, if possible."""
    F = A.field
    m = min_poly(A, a, e)
    P = _poly(F, m)
    _, facs = P.factor()
    if len(facs) < 2:
        return None, facs
    f1 = facs[0][0] ** facs[0][1]
    rest = P // f1
    g, u, v = f1.xgcd(rest)
    # u f1 + v rest = g (a nonzero constant)
    vr = (v * rest)
    coeffs = _poly_coeffs(F, vr)
    gc = _poly_coeffs(F, g)[0]
    e1 = _eval_poly(A, [c / gc for c in coeffs], a, e)
    e2 = e - e1
    if A.mul(e1, e1) != e1 or A.mul(e1, e2) != A.zero() or is_zero(e1) or is_zero(e2):
        raise EngineError("idempotent splitting produced a non-idempotent")
    return (e1, e2), facs


def _frobenius_split_element(A: Algebra, C: Subspace, JC: Subspace, e: Mat):
    """For commutative eAe/eJe over GF(p): an element of the fixed space of x -> x^p not in k e + J."""
    F = A.field
    p = F.p
    Q = JC.quotient_matrix()
    # coordinates of C/JC via representatives
    reps = []
    seen = JC
    for v in C.vectors():
        if not seen.contains(v):
            reps.append(v)
            seen = seen + Subspace.span(F, A.dim, [v])
    d = len(reps)
    if d <= 1:
        return None
    R = hstack(F, reps, rows=A.dim)
    QR = Q * R
    cols = []
    for v in reps:
        w = A.power(v, p) if p > 1 else v
        w = A.mul(A.mul(e, w), e)
        cols.append(solve(QR, Q * w) - solve(QR, Q * v))
    Fr = hstack(F, cols, rows=d)
    fixed = kernel(Fr)
    if fixed.dim <= 1:
        return None
    ecoords = solve(QR, Q * e)
    for c in fixed.vectors():
        if rank(hstack(F, [c, ecoords])) == 2:
            return R * c
    return None


def decompose(A: Algebra, max_tries: int = 400) -> Decomposition:
    F = A.field
    J = A.radical.space
    rng = random.Random(0x5EED + A.dim)
    done = []
    queue = [A.unit]
    while queue:
        e = queue.pop()
        C = corner(A, e)
        JC = C & J
        d = C.dim - JC.dim
        if d == 1:
            done.append(e)
            continue
        split = None
        cvecs = C.vectors()
        commutative_mod_j = all(
            JC.contains(A.mul(x, y) - A.mul(y, x)) for x in cvecs for y in cvecs)
        if F.is_finite and commutative_mod_j:
            a = _frobenius_split_element(A, C, JC, e)
            if a is None:
                done.append(e)  # a finite field extension: local corner
                continue
            split, _ = _try_split(A, a, e)
            if split is None:
                raise EngineError("Frobenius-fixed element failed to split")
        else:
            candidates = list(cvecs)
            candidates += [x + y for x, y in itertools.combinations(cvecs, 2)]
            tries = 0
            local_certified = False
            for a in _candidate_stream(F, cvecs, candidates, rng):
                tries += 1
                split, facs = _try_split(A, a, e)
                if split is not None:
                    break
                if commutative_mod_j and F.p is None:
                    (f, _k), = facs
                    if f.degree() == d:
                        local_certified = True
                        break
                if tries >= max_tries:
                    break
            if split is None:
                if local_certified:
                    done.append(e)
                    continue
                raise UnsupportedConfiguration(
                    f"could not split a corner of dimension {C.dim} over {F.name}; "
                    "division algebras beyond fields are not supported")
        queue.extend(split)
    done = _sort_idempotents(A, done)
    dec = Decomposition(done)
    _classify(A, dec)
    return dec


def _candidate_stream(F, cvecs, candidates, rng):
    yield from candidates
    small = [F(x) for x in range(-2, 3)] if F.p is None else list(F.elements())
    while True:
        v = F.mat(cvecs[0].nrows(), 1)
        for b in cvecs:
            v = v + b * rng.choice(small)
        yield v


def _sort_idempotents(A: Algebra, es):
    return sorted(es, key=lambda e: tuple(str(x) for x in e.entries()))


def _classify(A: Algebra, dec: Decomposition):
    J = A.radical.space
    es = dec.idempotents
    classes: list = []
    for i, e in enumerate(es):
        for cl in classes:
            f = es[cl[0]]
            prod = A.span_products(corner(A, e, f), corner(A, f, e))
            if not J.contains_space(prod):
                cl.append(i)
                break
        else:
            classes.append([i])
    dec.classes = classes
    dec.division_dims = []
    for cl in classes:
        e = es[cl[0]]
        C = corner(A, e)
        dec.division_dims.append(C.dim - (C & J).dim)


def is_semisimple(A: Algebra) -> bool:
    return A.radical.dim == 0


def is_simple(A: Algebra) -> bool:
    return A.radical.dim == 0 and A.center.dim == 1


def certify_matrix_algebra(A: Algebra) -> str:
    """Human-readable certificate for "A is M_n(k)" where honest."""
    n2 = A.dim
    n = int(round(n2 ** 0.5))
    if not is_simple(A) or n * n != n2:
        return "not central simple"
    # finite division rings are fields; over QQ split iff the corners eAe are k
    if A.field.is_finite:
        return f"M{n}({A.field.name}) [simple, central, dim {n2}]"
    try:
        split = all(d == 1 for d in A.decomposition.division_dims)
    except UnsupportedConfiguration:
        split = False
    if split:
        return f"M{n}({A.field.name}) [simple, central, dim {n2}]"
    return f"central simple of dim {n2}"
