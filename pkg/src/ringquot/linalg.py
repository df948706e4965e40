"""Exact linear algebra over GF(p) and the rationals.

Scalars are python-flint ``nmod`` (GF(p)) or ``fmpq`` (QQ) values and
matrices are ``nmod_mat`` / ``fmpq_mat``.  Vectors are column matrices.
Everything here is exact; there is no floating point anywhere.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from flint import fmpq, fmpq_mat, nmod, nmod_mat

from .errors import UsageError

MAX_PRIME = 1 << 16


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Field:
    """The base field: GF(p) for a prime p < 2^16, or QQ (``p=None``)."""

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None:
            if not _is_prime(p) or p >= MAX_PRIME:
                raise UsageError(f"GF(p) needs a prime p < {MAX_PRIME}, got {p}")
        self.p = p

    @classmethod
    def parse(cls, text: str) -> "Field":
        t = text.strip().replace(" ", "")
        if t in ("QQ", "Q"):
            return cls(None)
        m = re.fullmatch(r"GF\((\d+)\)", t)
        if not m:
            raise UsageError(f"unsupported field {text!r}; use QQ or GF(p)")
        return cls(int(m.group(1)))

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    @property
    def name(self) -> str:
        return "QQ" if self.p is None else f"GF({self.p})"

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __call__(self, x):
        if self.p is None:
            if isinstance(x, fmpq):
                return x
            if isinstance(x, str) and "/" in x:
                a, b = x.split("/")
                return fmpq(int(a), int(b))
            if hasattr(x, "numerator") and hasattr(x, "denominator"):
                return fmpq(int(x.numerator), int(x.denominator))
            return fmpq(int(x))
        if isinstance(x, str) and "/" in x:
            a, b = x.split("/")
            return nmod(int(a), self.p) / nmod(int(b), self.p)
        return nmod(int(x), self.p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def fmt(self, x) -> str:
        if self.p is None:
            return str(fmpq(x))
        return str(int(x))

    def elements(self) -> Iterator:
        if self.p is None:
            raise UsageError("cannot enumerate the elements of QQ")
        return (nmod(i, self.p) for i in range(self.p))

    # -- matrix constructors -------------------------------------------------
    def matrix(self, rows: Sequence[Sequence]) -> "Mat":
        rows = list(rows)
        r = len(rows)
        c = len(rows[0]) if r else 0
        return self.mat(r, c, [x for row in rows for x in row])

    def mat(self, r: int, c: int, entries: Sequence | None = None) -> "Mat":
        if self.p is None:
            if entries is None:
                return fmpq_mat(r, c)
            return fmpq_mat(r, c, [self(x) for x in entries])
        if entries is None:
            return nmod_mat(r, c, self.p)
        try:
            return nmod_mat(r, c, entries, self.p)
        except (TypeError, ValueError):
            return nmod_mat(r, c, [int(x) % self.p for x in entries], self.p)

    def zeros(self, r: int, c: int) -> "Mat":
        return self.mat(r, c)

    def eye(self, n: int) -> "Mat":
        m = self.mat(n, n)
        for i in range(n):
            m[i, i] = self.one
        return m

    def vector(self, values: Iterable) -> "Mat":
        vals = list(values)
        return self.mat(len(vals), 1, vals)

    def unit_vector(self, n: int, i: int) -> "Mat":
        v = self.mat(n, 1)
        v[i, 0] = self.one
        return v

    def vectors(self, n: int) -> Iterator["Mat"]:
        """Every vector of GF(p)^n (finite fields only)."""
        if self.p is None:
            raise UsageError("cannot enumerate vectors over QQ")
        for t in itertools.product(range(self.p), repeat=n):
            yield nmod_mat(n, 1, list(t), self.p)


Mat = nmod_mat | fmpq_mat


def field_of(m: Mat) -> Field:
    if isinstance(m, nmod_mat):
        return Field(m.modulus())
    return Field(None)


def entries(m: Mat) -> list:
    return m.entries()


def to_lists(m: Mat) -> list[list]:
    e = m.entries()
    c = m.ncols()
    return [e[i * c:(i + 1) * c] for i in range(m.nrows())]


def is_zero(m: Mat) -> bool:
    return all(x == 0 for x in m.entries())


def column(m: Mat, j: int) -> Mat:
    F = field_of(m)
    return F.mat(m.nrows(), 1, [m[i, j] for i in range(m.nrows())])


def columns(m: Mat) -> list[Mat]:
    return [column(m, j) for j in range(m.ncols())]


def hstack(F: Field, blocks: Sequence[Mat], rows: int | None = None) -> Mat:
    blocks = [b for b in blocks]
    if not blocks:
        return F.mat(rows or 0, 0)
    r = blocks[0].nrows()
    if any(b.nrows() != r for b in blocks):
        raise UsageError("hstack: row count mismatch")
    lists = [to_lists(b) for b in blocks]
    out = []
    for i in range(r):
        for L in lists:
            out.extend(L[i])
    return F.mat(r, sum(b.ncols() for b in blocks), out)


def vstack(F: Field, blocks: Sequence[Mat], cols: int | None = None) -> Mat:
    blocks = [b for b in blocks]
    if not blocks:
        return F.mat(0, cols or 0)
    c = blocks[0].ncols()
    if any(b.ncols() != c for b in blocks):
        raise UsageError("vstack: column count mismatch")
    out = []
    for b in blocks:
        out.extend(b.entries())
    return F.mat(sum(b.nrows() for b in blocks), c, out)


def kron(A: Mat, B: Mat) -> Mat:
    F = field_of(A)
    ar, ac, br, bc = A.nrows(), A.ncols(), B.nrows(), B.ncols()
    out = F.mat(ar * br, ac * bc)
    # action matrices are sparse; touch only nonzero pairs
    bnz = [(k, l, y) for k, row in enumerate(to_lists(B)) for l, y in enumerate(row) if y != 0]
    for i, row in enumerate(to_lists(A)):
        for j, x in enumerate(row):
            if x != 0:
                for k, l, y in bnz:
                    out[i * br + k, j * bc + l] = x * y
    return out


def rref(m: Mat) -> tuple[Mat, tuple[int, ...]]:
    """Reduced row-echelon form and the pivot columns."""
    if m.nrows() == 0 or m.ncols() == 0:
        return m, ()
    R, rk = m.rref()
    piv = []
    c = m.ncols()
    e = R.entries()
    for i in range(rk):
        row = e[i * c:(i + 1) * c]
        for j, x in enumerate(row):
            if x != 0:
                piv.append(j)
                break
    return R, tuple(piv)


def rank(m: Mat) -> int:
    if m.nrows() == 0 or m.ncols() == 0:
        return 0
    return m.rref()[1]


def kernel(A: Mat) -> "Subspace":
    """{x : A x = 0} with canonical basis."""
    F = field_of(A)
    n = A.ncols()
    R, piv = rref(A)
    free = [j for j in range(n) if j not in set(piv)]
    rows = []
    rl = to_lists(R) if piv else []
    for f in free:
        v = [F.zero] * n
        v[f] = F.one
        for i, pc in enumerate(piv):
            v[pc] = -rl[i][f]
        rows.append(v)
    return Subspace.from_rows(F, n, rows)


def solve(A: Mat, b: Mat) -> Mat | None:
    """Some x with A x = b, or None when the system is inconsistent."""
    if A.nrows() != b.nrows():
        raise UsageError(f"solve: A has {A.nrows()} rows but b has {b.nrows()}")
    F = field_of(A)
    n = A.ncols()
    aug = hstack(F, [A, b])
    R, piv = rref(aug)
    if n in piv:
        return None
    x = F.mat(n, 1)
    for i, pc in enumerate(piv):
        x[pc, 0] = R[i, n]
    return x


def solve_many(A: Mat, B: Mat) -> Mat | None:
    """Some X with A X = B (all columns at once), or None."""
    F = field_of(A)
    n = A.ncols()
    k = B.ncols()
    R, piv = rref(hstack(F, [A, B]))
    if any(pc >= n for pc in piv):
        return None
    X = F.mat(n, k)
    for i, pc in enumerate(piv):
        for j in range(k):
            X[pc, j] = R[i, n + j]
    return X


def _key_entries(F: Field, es: list) -> tuple:
    if F.p is None:
        return tuple((int(x.p), int(x.q)) for x in es)
    return tuple(int(x) for x in es)


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of F^n stored by its canonical RREF basis (rows)."""

    field: Field
    ambient_dim: int
    basis: Mat
    pivots: tuple[int, ...]

    @classmethod
    def from_rows(cls, F: Field, n: int, rows: Sequence[Sequence]) -> "Subspace":
        rows = [list(r) for r in rows]
        if not rows:
            return cls(F, n, F.mat(0, n), ())
        return cls.from_matrix(F.mat(len(rows), n, [x for r in rows for x in r]))

    @classmethod
    def from_matrix(cls, M: Mat) -> "Subspace":
        """Row space of M."""
        F = field_of(M)
        n = M.ncols()
        R, piv = rref(M)
        k = len(piv)
        B = F.mat(k, n, R.entries()[: k * n]) if k else F.mat(0, n)
        return cls(F, n, B, piv)

    @classmethod
    def span(cls, F: Field, n: int, vectors: Iterable[Mat]) -> "Subspace":
        vs = [v for v in vectors]
        if not vs:
            return cls.zero(F, n)
        for v in vs:
            if v.nrows() != n:
                raise UsageError("span: vector length mismatch")
        M = F.mat(len(vs), n, [x for v in vs for x in v.entries()])
        return cls.from_matrix(M)

    @classmethod
    def column_space(cls, M: Mat) -> "Subspace":
        return cls.from_matrix(M.transpose())

    @classmethod
    def zero(cls, F: Field, n: int) -> "Subspace":
        return cls(F, n, F.mat(0, n), ())

    @classmethod
    def full(cls, F: Field, n: int) -> "Subspace":
        return cls(F, n, F.eye(n), tuple(range(n)))

    # -- identity --------------------------------------------------------------
    @property
    def key(self) -> tuple:
        return (self.field.p, self.ambient_dim, _key_entries(self.field, self.basis.entries()))

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, {self.field.name})"

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def vectors(self) -> list[Mat]:
        F, n = self.field, self.ambient_dim
        e = self.basis.entries()
        return [F.mat(n, 1, e[i * n:(i + 1) * n]) for i in range(self.dim)]

    def matrix(self) -> Mat:
        """n x dim matrix whose columns are the basis vectors."""
        return self.basis.transpose()

    def _check(self, other: "Subspace"):
        if other.ambient_dim != self.ambient_dim or other.field != self.field:
            raise UsageError("subspaces live in different ambient spaces")

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if other.dim == 0:
            return self
        if self.dim == 0:
            return other
        return Subspace.from_matrix(vstack(self.field, [self.basis, other.basis]))

    def __and__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient_dim)
        # a^T U = b^T W  <=>  [U^T | -W^T] (a; b) = 0
        F = self.field
        block = hstack(F, [self.basis.transpose(), -other.basis.transpose()])
        K = kernel(block)
        vecs = []
        k = self.dim
        U = self.basis.transpose()
        for v in K.vectors():
            a = F.mat(k, 1, v.entries()[:k])
            vecs.append(U * a)
        return Subspace.span(F, self.ambient_dim, vecs)

    def reduce(self, v: Mat) -> Mat:
        """Residual of v after elimination against the basis."""
        if not self.pivots:
            return copy_mat(v)
        # RREF rows have unit pivots, so v - B^T v[pivots] clears every pivot entry
        vp = self.field.mat(self.dim, 1, [v[pc, 0] for pc in self.pivots])
        return v - self.basis.transpose() * vp

    def contains(self, v: Mat) -> bool:
        if v.nrows() != self.ambient_dim:
            raise UsageError("contains: vector length mismatch")
        return is_zero(self.reduce(v))

    def __contains__(self, v: Mat) -> bool:
        return self.contains(v)

    def contains_space(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.contains(v) for v in other.vectors())

    def __le__(self, other: "Subspace") -> bool:
        return other.contains_space(self)

    def coords(self, v: Mat) -> Mat:
        """Coordinates of v (assumed inside) in the canonical basis."""
        return self.field.mat(self.dim, 1, [v[pc, 0] for pc in self.pivots])

    def complement_indices(self) -> list[int]:
        ps = set(self.pivots)
        return [j for j in range(self.ambient_dim) if j not in ps]

    def quotient_coords(self, v: Mat) -> Mat:
        """Coordinates of v + U in ambient/U w.r.t. the non-pivot unit vectors."""
        r = self.reduce(v)
        idx = self.complement_indices()
        return self.field.mat(len(idx), 1, [r[j, 0] for j in idx])

    def quotient_matrix(self) -> Mat:
        """The projection ambient -> ambient/U as a matrix."""
        F = self.field
        n = self.ambient_dim
        idx = self.complement_indices()
        e = self.basis.entries()
        Q = F.mat(len(idx), n)
        for a, j in enumerate(idx):
            Q[a, j] = F.one
            for i, pc in enumerate(self.pivots):
                x = e[i * n + j]
                if x != 0:
                    Q[a, pc] = -x
        return Q

    def elements(self) -> Iterator[Mat]:
        """Every vector of the subspace (finite fields only)."""
        F = self.field
        vs = self.vectors()
        B = self.matrix()
        for c in F.vectors(self.dim):
            yield B * c if vs else F.mat(self.ambient_dim, 1)

    def image(self, A: Mat) -> "Subspace":
        """Image of the subspace under the linear map A."""
        F = self.field
        return Subspace.span(F, A.nrows(), [A * v for v in self.vectors()])


def copy_mat(v: Mat) -> Mat:
    F = field_of(v)
    return F.mat(v.nrows(), v.ncols(), v.entries())


def preimage(A: Mat, U: Subspace) -> Subspace:
    """{x : A x in U}."""
    F = field_of(A)
    Q = U.quotient_matrix()
    if Q.nrows() == 0:
        return Subspace.full(F, A.ncols())
    return kernel(Q * A)


def image(A: Mat) -> Subspace:
    return Subspace.column_space(A)
