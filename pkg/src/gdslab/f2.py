"""Exact linear algebra over the two-element field.

Matrices store one Python int per row (bit j = column j), so row operations
are single word-level XORs and everything stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, List, NamedTuple, Sequence, Tuple


class PreconditionError(ValueError):
    """A stated precondition failed; the result would be meaningless, not false."""


class F2Matrix:
    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Sequence[int] | None = None):
        self.rows = rows
        self.cols = cols
        if data is None:
            self.data = [0] * rows
        else:
            if len(data) != rows:
                raise ValueError("row count mismatch")
            mask = (1 << cols) - 1
            self.data = [r & mask for r in data]

    @classmethod
    def from_dense(cls, entries: Sequence[Sequence[int]]) -> "F2Matrix":
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        data = []
        for row in entries:
            bits = 0
            for j, v in enumerate(row):
                if v & 1:
                    bits |= 1 << j
            data.append(bits)
        return cls(rows, cols, data)

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "F2Matrix":
        return cls(rows, cols)

    def copy(self) -> "F2Matrix":
        return F2Matrix(self.rows, self.cols, list(self.data))

    def get(self, r: int, c: int) -> int:
        return (self.data[r] >> c) & 1

    def row(self, r: int) -> int:
        return self.data[r]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, F2Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __repr__(self) -> str:
        lines = [
            "".join(str((r >> j) & 1) for j in range(self.cols)) for r in self.data
        ]
        return f"F2Matrix({self.rows}x{self.cols}:[" + ",".join(lines) + "])"

    def transpose(self) -> "F2Matrix":
        out = [0] * self.cols
        for i, r in enumerate(self.data):
            while r:
                low = r & -r
                j = low.bit_length() - 1
                out[j] |= 1 << i
                r ^= low
        return F2Matrix(self.cols, self.rows, out)

    def matvec(self, v: int) -> int:
        """Apply to a column vector given as a bitmask over columns."""
        out = 0
        for i, r in enumerate(self.data):
            if (r & v).bit_count() & 1:
                out |= 1 << i
        return out

    def matmul(self, other: "F2Matrix") -> "F2Matrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ot = other.transpose()
        data = []
        for r in self.data:
            bits = 0
            for j, col in enumerate(ot.data):
                if (r & col).bit_count() & 1:
                    bits |= 1 << j
            data.append(bits)
        return F2Matrix(self.rows, other.cols, data)

    def rref(self) -> Tuple["F2Matrix", List[int]]:
        """Reduced row echelon form; returns (matrix, pivot column list)."""
        work = list(self.data)
        pivots: List[int] = []
        r = 0
        for c in range(self.cols):
            sel = None
            for i in range(r, len(work)):
                if (work[i] >> c) & 1:
                    sel = i
                    break
            if sel is None:
                continue
            work[r], work[sel] = work[sel], work[r]
            for i in range(len(work)):
                if i != r and ((work[i] >> c) & 1):
                    work[i] ^= work[r]
            pivots.append(c)
            r += 1
            if r == len(work):
                break
        return F2Matrix(self.rows, self.cols, work), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> List[int]:
        """Basis (as column bitmasks) of {v : M v = 0}."""
        red, pivots = self.rref()
        pivot_set = set(pivots)
        free = [c for c in range(self.cols) if c not in pivot_set]
        basis = []
        for f in free:
            v = 1 << f
            for i, p in enumerate(pivots):
                if (red.data[i] >> f) & 1:
                    v |= 1 << p
            basis.append(v)
        return basis

    def row_space_basis(self) -> List[int]:
        red, pivots = self.rref()
        return [red.data[i] for i in range(len(pivots))]


def reduce_by_rref(vec: int, rref_rows: Sequence[int]) -> int:
    """Canonical (lexicographically least) coset representative of vec + span(rows)."""
    for row in rref_rows:
        if row == 0:
            continue
        pivot = row & -row
        if vec & pivot:
            vec ^= row
    return vec


def in_span(vec: int, rref_rows: Sequence[int]) -> bool:
    return reduce_by_rref(vec, rref_rows) == 0


@dataclass(frozen=True)
class Subspace:
    """A subspace of F2^n held as a canonical RREF basis, so equality is bitwise."""

    ambient_dim: int
    basis: Tuple[int, ...]

    @classmethod
    def from_vectors(cls, ambient_dim: int, vectors: Iterable[int]) -> "Subspace":
        m = F2Matrix(len(list_v := list(vectors)), ambient_dim, list_v)
        return cls(ambient_dim, tuple(m.row_space_basis()))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: int) -> bool:
        return in_span(v, self.basis)

    def vectors(self) -> List[int]:
        """All 2^dim elements; only sensible for small subspaces."""
        out = [0]
        for b in self.basis:
            out += [v ^ b for v in out]
        return out

    def basis_matrix(self) -> F2Matrix:
        return F2Matrix(self.dim, self.ambient_dim, list(self.basis))


def rank_nullspace(m: F2Matrix) -> Tuple[int, Subspace]:
    """Rank and a canonical basis of the right null space of m."""
    ns = m.nullspace()
    return m.cols - len(ns), Subspace.from_vectors(m.cols, ns)


def subspace_intersection(u: Subspace, v: Subspace) -> Subspace:
    if u.ambient_dim != v.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    # Coefficient vectors (a | b) with a.U + b.V = 0 give intersection elements a.U.
    stacked = F2Matrix(
        u.dim + v.dim, u.ambient_dim, list(u.basis) + list(v.basis)
    ).transpose()
    vecs = []
    for coeff in stacked.nullspace():
        x = 0
        for i in range(u.dim):
            if (coeff >> i) & 1:
                x ^= u.basis[i]
        vecs.append(x)
    return Subspace.from_vectors(u.ambient_dim, vecs)


def subspace_intersection_dim(u: Subspace, v: Subspace) -> int:
    return subspace_intersection(u, v).dim


def bilinear(q: F2Matrix, x: int, y: int) -> int:
    """(x, Q y) over F2."""
    return (x & q.matvec(y)).bit_count() & 1


def is_isotropic(q: F2Matrix, u: Subspace) -> bool:
    """True iff the form vanishes on u, checked on all basis pairs."""
    if q.rows != q.cols or q.rows != u.ambient_dim:
        raise ValueError("shape mismatch")
    qb = [q.matvec(b) for b in u.basis]
    for i, bi in enumerate(u.basis):
        for j in range(i, u.dim):
            if (bi & qb[j]).bit_count() & 1:
                return False
    return True


def _zero_sum_triple_space(a: Subspace, b: Subspace, c: Subspace) -> List[Tuple[int, int]]:
    """Pairs (x, y), x in A, y in B with x + y in C, spanning the zero-sum triples.

    Returned pairs form a basis of the solution space of the stacked linear
    system; the triples themselves are (x, y, x ^ y).
    """
    dims = (a.dim, b.dim, c.dim)
    stacked = F2Matrix(
        sum(dims), a.ambient_dim, list(a.basis) + list(b.basis) + list(c.basis)
    ).transpose()
    pairs = []
    for coeff in stacked.nullspace():
        x = 0
        for i in range(a.dim):
            if (coeff >> i) & 1:
                x ^= a.basis[i]
        y = 0
        for i in range(b.dim):
            if (coeff >> (a.dim + i)) & 1:
                y ^= b.basis[i]
        pairs.append((x, y))
    return pairs


def no_twist_holds(q: F2Matrix, a: Subspace, b: Subspace, c: Subspace) -> bool:
    """Check (x, Q y) = 0 for every triple x+y+z = 0 drawn from (a, b, c).

    The zero-sum triples form a linear space K; (x, Qy) is a quadratic form on
    K, so it vanishes identically iff it vanishes on a basis of K and its polar
    form vanishes on all basis pairs.  No exponential enumeration needed.
    """
    if not (a.ambient_dim == b.ambient_dim == c.ambient_dim == q.cols):
        raise ValueError("dimension mismatch")
    pairs = _zero_sum_triple_space(a, b, c)
    for x, y in pairs:
        if bilinear(q, x, y):
            return False
    for (x1, y1), (x2, y2) in combinations(pairs, 2):
        if bilinear(q, x1, y2) ^ bilinear(q, x2, y1):
            return False
    return True


def hyperbolic_form(j: int) -> F2Matrix:
    """The 2j x 2j block form with 0 1 / 1 0 blocks on the diagonal."""
    m = F2Matrix.zeros(2 * j, 2 * j)
    for i in range(j):
        m.data[2 * i] = 1 << (2 * i + 1)
        m.data[2 * i + 1] = 1 << (2 * i)
    return m


def is_hyperbolic_form(q: F2Matrix) -> bool:
    return q.rows == q.cols and q.rows % 2 == 0 and q == hyperbolic_form(q.rows // 2)


class ParityCheck(NamedTuple):
    sum_mod2: int
    j_mod2: int
    identity_holds: bool


def triple_intersection_parity(
    q: F2Matrix, a: Subspace, b: Subspace, c: Subspace
) -> ParityCheck:
    """Parity of dim(A&B) + dim(B&C) + dim(C&A) against j, for maximal
    isotropic subspaces of the standard block form satisfying the no-twist
    condition.  Precondition failures raise, so they are never confused with
    a failed identity."""
    if not is_hyperbolic_form(q):
        raise PreconditionError("form is not the standard hyperbolic block form")
    j = q.rows // 2
    for name, s in (("A", a), ("B", b), ("C", c)):
        if s.ambient_dim != 2 * j:
            raise PreconditionError(f"{name} has wrong ambient dimension")
        if s.dim != j:
            raise PreconditionError(f"{name} is not maximal (dim {s.dim} != {j})")
        if not is_isotropic(q, s):
            raise PreconditionError(f"{name} is not isotropic")
    if not no_twist_holds(q, a, b, c):
        raise PreconditionError("no-twist condition fails")
    total = (
        subspace_intersection_dim(a, b)
        + subspace_intersection_dim(b, c)
        + subspace_intersection_dim(c, a)
    )
    return ParityCheck(total % 2, j % 2, total % 2 == j % 2)


def enumerate_max_isotropics(q: F2Matrix, j: int) -> List[Subspace]:
    """All j-dimensional subspaces on which the (zero-diagonal symmetric) form
    vanishes, deduplicated via canonical bases.  Guarded to ambient dim <= 8."""
    n = q.rows
    if q.cols != n:
        raise ValueError("form must be square")
    if n > 8:
        raise ValueError("enumeration guard: ambient dimension > 8")
    if j == 0:
        return [Subspace.from_vectors(n, [])]
    for i in range(n):
        if q.get(i, i):
            raise ValueError("form must have zero diagonal")
    level = {Subspace.from_vectors(n, [])}
    for _ in range(j):
        nxt = set()
        for sub in level:
            # Candidates must be Q-orthogonal to the whole subspace; with a
            # zero diagonal every vector is isotropic by itself.
            if sub.dim == 0:
                perp = list(range(n))
                perp_basis = [1 << i for i in range(n)]
            else:
                constraint = F2Matrix(
                    sub.dim, n, [q.matvec(b) for b in sub.basis]
                )
                perp_basis = constraint.nullspace()
            span = [0]
            for b in perp_basis:
                span += [v ^ b for v in span]
            for v in span:
                if v and not sub.contains(v):
                    nxt.add(Subspace.from_vectors(n, list(sub.basis) + [v]))
        level = nxt
    return sorted(level, key=lambda s: s.basis)


def symmetric_zero_diagonal_matrices(n: int):
    """Yield all symmetric n x n F2 matrices with zero diagonal."""
    positions = [(i, k) for i in range(n) for k in range(i + 1, n)]
    for bits in range(1 << len(positions)):
        m = F2Matrix.zeros(n, n)
        for idx, (i, k) in enumerate(positions):
            if (bits >> idx) & 1:
                m.data[i] |= 1 << k
                m.data[k] |= 1 << i
        yield m


def exists_nonsingular_alternating(n: int) -> bool:
    """Exhaustive search for a nonsingular symmetric zero-diagonal matrix."""
    return any(m.rank() == n for m in symmetric_zero_diagonal_matrices(n))
