"""Exact integer linear algebra: Hermite/Smith normal forms, kernels, solving.

Everything here works on Python ints, so there is no overflow and no floating
point.  Matrices are small (at most a few thousand rows, ~150 columns), so the
algorithms favour clarity and determinism over asymptotic speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple[int, ...]
RatVector = tuple[Fraction, ...]


class NotUnimodular(ValueError):
    pass


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix stored row-major."""

    nrows: int
    ncols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.nrows * self.ncols != len(self.entries):
            raise ValueError(
                f"{self.nrows}x{self.ncols} matrix needs {self.nrows * self.ncols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], ncols: int | None = None) -> "IntMatrix":
        rows = [tuple(int(a) for a in r) for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(a for r in rows for a in r))

    @classmethod
    def from_columns(cls, cols: Iterable[Sequence[int]], nrows: int | None = None) -> "IntMatrix":
        cols = [tuple(c) for c in cols]
        if nrows is None:
            nrows = len(cols[0])
        return cls.from_rows(zip(*cols), len(cols)) if cols else cls(nrows, 0, ())

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls(nrows, ncols, (0,) * (nrows * ncols))

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> "IntMatrix":
        """Matrix P with P e_j = e_{perm[j]}."""
        n = len(perm)
        entries = [0] * (n * n)
        for j, i in enumerate(perm):
            entries[i * n + j] = 1
        return cls(n, n, tuple(entries))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.ncols + j]

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def row(self, i: int) -> Vector:
        return self.entries[i * self.ncols:(i + 1) * self.ncols]

    def col(self, j: int) -> Vector:
        return self.entries[j::self.ncols] if self.ncols else ()

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.nrows)]

    def columns(self) -> list[Vector]:
        return [self.col(j) for j in range(self.ncols)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix.from_rows((self.col(j) for j in range(self.ncols)), self.nrows)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = other.columns()
            rows = [self.row(i) for i in range(self.nrows)]
            return IntMatrix(
                self.nrows,
                other.ncols,
                tuple(sum(a * b for a, b in zip(r, c)) for r in rows for c in cols),
            )
        v = tuple(other)
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(self.row(i), v)) for i in range(self.nrows))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.nrows, self.ncols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.nrows, self.ncols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.nrows, self.ncols, tuple(-a for a in self.entries))

    def det(self) -> int:
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        return _bareiss_det(self.to_rows())

    def __repr__(self) -> str:
        return f"IntMatrix({self.to_rows()})"


def as_matrix(M) -> IntMatrix:
    return M if isinstance(M, IntMatrix) else IntMatrix.from_rows(M)


def _bareiss_det(a: list[list[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _row_hnf(a: list[list[int]], u: list[list[int]] | None) -> list[list[int]]:
    """In-place row Hermite normal form of ``a``; row operations mirrored on ``u``."""
    m = len(a)
    n = len(a[0]) if m else 0

    def swap(i, j):
        a[i], a[j] = a[j], a[i]
        if u is not None:
            u[i], u[j] = u[j], u[i]

    def addmul(dst, src, q):
        # row[dst] -= q * row[src]
        ra, rs = a[dst], a[src]
        for k in range(n):
            if rs[k]:
                ra[k] -= q * rs[k]
        if u is not None:
            ua, us = u[dst], u[src]
            for k in range(len(us)):
                if us[k]:
                    ua[k] -= q * us[k]

    r = 0
    for j in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if a[i][j] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: (abs(a[i][j]), i))
            if piv != r:
                swap(piv, r)
            done = True
            for i in range(r + 1, m):
                if a[i][j]:
                    addmul(i, r, a[i][j] // a[r][j])
                    if a[i][j]:
                        done = False
            if done:
                break
        if a[r][j] == 0:
            continue
        if a[r][j] < 0:
            a[r] = [-x for x in a[r]]
            if u is not None:
                u[r] = [-x for x in u[r]]
        for i in range(r):
            q = a[i][j] // a[r][j]
            if q:
                addmul(i, r, q)
        r += 1
    return a


def hermite_normal_form(M) -> tuple[IntMatrix, IntMatrix]:
    """Row-style HNF.  Returns ``(H, U)`` with ``U`` unimodular and ``U @ M == H``.

    Pivots are positive and the entries above each pivot lie in ``[0, pivot)``.
    """
    M = as_matrix(M)
    a = M.to_rows()
    u = [[int(i == j) for j in range(M.nrows)] for i in range(M.nrows)]
    _row_hnf(a, u)
    return IntMatrix.from_rows(a, M.ncols), IntMatrix.from_rows(u, M.nrows)


def smith_normal_form(M) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Returns ``(S, U, V)`` with ``U @ M @ V == S`` diagonal, ``d1 | d2 | ...``, all >= 0.

    The pivot is always the smallest-magnitude nonzero entry of the remaining
    block (first in row-major order on ties).
    """
    M = as_matrix(M)
    m, n = M.shape
    a = M.to_rows()
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(dst, src, q):
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def col_op(dst, src, q):
        for row in a:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return (
                    IntMatrix.from_rows(a, n),
                    IntMatrix.from_rows(u, m),
                    IntMatrix.from_rows(v, n),
                )
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    row_op(i, t, a[i][t] // p)
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, n):
                if a[t][j]:
                    col_op(j, t, a[t][j] // p)
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            row_op(t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return IntMatrix.from_rows(a, n), IntMatrix.from_rows(u, m), IntMatrix.from_rows(v, n)


def smith_divisors(M) -> list[int]:
    """Nonzero diagonal entries of the Smith form."""
    S, _, _ = smith_normal_form(M)
    return [S[i, i] for i in range(min(S.shape)) if S[i, i]]


def rank(M) -> int:
    M = as_matrix(M)
    if M.nrows == 0 or M.ncols == 0:
        return 0
    a = _row_hnf(M.to_rows(), None)
    return sum(1 for r in a if any(r))


def integer_kernel(M) -> list[Vector]:
    """A Z-basis of ``{x : M x = 0}``, returned in Hermite normal form (canonical)."""
    M = as_matrix(M)
    n = M.ncols
    if n == 0:
        return []
    if M.nrows == 0:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    # Row-reduce M^T; rows of U that kill M^T span the kernel.
    H, U = hermite_normal_form(M.T)
    basis = [U.row(i) for i in range(n) if not any(H.row(i))]
    if not basis:
        return []
    K, _ = hermite_normal_form(IntMatrix.from_rows(basis, n))
    return [K.row(i) for i in range(K.nrows) if any(K.row(i))]


def unimodular_inverse(M) -> IntMatrix:
    M = as_matrix(M)
    if not M.is_square():
        raise NotUnimodular("matrix is not square")
    d = M.det()
    if d not in (1, -1):
        raise NotUnimodular(f"determinant {d} is not a unit")
    H, U = hermite_normal_form(M)
    assert H == IntMatrix.identity(M.nrows)
    return U


def is_unimodular(M) -> bool:
    M = as_matrix(M)
    return M.is_square() and M.det() in (1, -1)


def solve_integer(M, b: Sequence[int]) -> Vector | None:
    """Some integer ``x`` with ``M x = b``, or ``None`` if there is none."""
    M = as_matrix(M)
    b = tuple(b)
    if len(b) != M.nrows:
        raise ValueError("right-hand side has wrong length")
    S, U, V = smith_normal_form(M)
    c = U @ b
    y = [0] * M.ncols
    for i in range(M.nrows):
        d = S[i, i] if i < M.ncols else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    return V @ tuple(y)


def rational_solve(M, b: Sequence) -> RatVector | None:
    """Unique rational solution of a full-column-rank system, else ``None``.

    Raises ``ValueError`` when ``M`` has dependent columns.
    """
    M = as_matrix(M)
    m, n = M.shape
    aug = [[Fraction(x) for x in M.row(i)] + [Fraction(b[i])] for i in range(m)]
    r = 0
    pivots = []
    for j in range(n):
        piv = next((i for i in range(r, m) if aug[i][j] != 0), None)
        if piv is None:
            raise ValueError("columns are linearly dependent")
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][j]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][j]:
                f = aug[i][j]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(j)
        r += 1
    if any(aug[i][n] != 0 for i in range(r, m)):
        return None
    return tuple(aug[i][n] for i in range(n))


def primitive(v: Sequence[int]) -> Vector:
    from math import gcd

    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(x // g for x in v)
