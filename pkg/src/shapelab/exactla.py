"""Exact integer linear algebra: matrices, Smith normal form, kernels, solving.

All arithmetic uses Python integers, so there is no overflow and no floating
point anywhere.  Matrices are immutable; the elimination routines work on
private list-of-lists copies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Iterable, Optional, Sequence


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    # -- construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: Optional[int] = None) -> "IntMatrix":
        columns = [list(c) for c in columns]
        if rows is None:
            if not columns:
                raise ValueError("row count required for a matrix with no columns")
            rows = len(columns[0])
        for c in columns:
            if len(c) != rows:
                raise ValueError("ragged columns")
        return cls(rows, len(columns), tuple(int(columns[j][i]) for i in range(rows) for j in range(len(columns))))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: Optional[int] = None, cols: Optional[int] = None) -> "IntMatrix":
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            out[i][i] = int(v)
        return cls.from_rows(out, cols)

    # -- access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.cols)]

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __repr__(self):
        return f"IntMatrix({self.to_rows()!r})" if self.rows else f"IntMatrix.zeros(0, {self.cols})"

    # -- arithmetic ---------------------------------------------------------

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        a = self.to_rows()
        bcols = other.columns()
        return IntMatrix(
            self.rows,
            other.cols,
            tuple(sum(x * y for x, y in zip(r, c)) for r in a for c in bcols),
        )

    def apply(self, vector: Sequence[int]) -> tuple[int, ...]:
        if len(vector) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(sum(x * y for x, y in zip(self.row(i), vector)) for i in range(self.rows))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols, tuple(x + y for x, y in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols, tuple(x - y for x, y in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-x for x in self.entries))

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(k * x for x in self.entries))

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)))

    def select_rows(self, idx: Iterable[int]) -> "IntMatrix":
        idx = list(idx)
        return IntMatrix(len(idx), self.cols, tuple(x for i in idx for x in self.row(i)))

    def select_cols(self, idx: Iterable[int]) -> "IntMatrix":
        idx = list(idx)
        return IntMatrix(self.rows, len(idx), tuple(self.entries[i * self.cols + j] for i in range(self.rows) for j in idx))

    def determinant(self) -> int:
        """Bareiss fraction-free determinant."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]


def hstack(*blocks: IntMatrix, rows: Optional[int] = None) -> IntMatrix:
    if not blocks:
        return IntMatrix.zeros(rows or 0, 0)
    r = blocks[0].rows
    if any(b.rows != r for b in blocks):
        raise ValueError("hstack needs equal row counts")
    cols = sum(b.cols for b in blocks)
    out = []
    for i in range(r):
        for b in blocks:
            out.extend(b.row(i))
    return IntMatrix(r, cols, tuple(out))


def vstack(*blocks: IntMatrix, cols: Optional[int] = None) -> IntMatrix:
    if not blocks:
        return IntMatrix.zeros(0, cols or 0)
    c = blocks[0].cols
    if any(b.cols != c for b in blocks):
        raise ValueError("vstack needs equal column counts")
    return IntMatrix(sum(b.rows for b in blocks), c, tuple(x for b in blocks for x in b.entries))


def block_diag(*blocks: IntMatrix) -> IntMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            out[r0 + i][c0:c0 + b.cols] = b.row(i)
        r0 += b.rows
        c0 += b.cols
    return IntMatrix(rows, cols, tuple(x for r in out for x in r))


# -- Smith normal form ------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``D`` in Smith form.

    The inverses of ``U`` and ``V`` are carried along because every consumer
    in this package needs one of them.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix
    rank: int
    _diag: tuple[int, ...] = field(repr=False, default=())

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """Nonzero diagonal entries d1 | d2 | ... | dr."""
        return self._diag

    def solve(self, b: Sequence[int]) -> Optional[tuple[int, ...]]:
        """Some integer ``x`` with ``A x = b``, or None."""
        if len(b) != self.U.cols:
            raise ValueError("right-hand side has the wrong length")
        c = self.U.apply(b)
        y = [0] * self.V.rows
        for i, ci in enumerate(c):
            if i < self.rank:
                q, r = divmod(ci, self._diag[i])
                if r:
                    return None
                y[i] = q
            elif ci:
                return None
        return self.V.apply(y)

    def contains(self, b: Sequence[int]) -> bool:
        """True iff ``b`` lies in the column lattice of ``A``."""
        c = self.U.apply(b)
        for i, ci in enumerate(c):
            if i < self.rank:
                if ci % self._diag[i]:
                    return False
            elif ci:
                return False
        return True

    def kernel(self) -> IntMatrix:
        return self.V.select_cols(range(self.rank, self.V.cols))

    def image_basis(self) -> IntMatrix:
        """A Z-basis of the column lattice of ``A``, as columns."""
        n = self.U_inv.rows
        cols = [
            tuple(self.U_inv[i, j] * self._diag[j] for i in range(n))
            for j in range(self.rank)
        ]
        return IntMatrix.from_columns(cols, rows=n)


def _snf_lists(a: list[list[int]], m: int, n: int):
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    ui = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]
    vi = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]
        for row in ui:
            row[i], row[k] = row[k], row[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]
        vi[j], vi[k] = vi[k], vi[j]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        ra, rs = a[dst], a[src]
        for j in range(n):
            if rs[j]:
                ra[j] += q * rs[j]
        ud, us = u[dst], u[src]
        for j in range(m):
            if us[j]:
                ud[j] += q * us[j]
        for row in ui:
            if row[dst]:
                row[src] -= q * row[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for row in a:
            if row[src]:
                row[dst] += q * row[src]
        for row in v:
            if row[src]:
                row[dst] += q * row[src]
        vd, vs = vi[dst], vi[src]
        for j in range(n):
            if vd[j]:
                vs[j] -= q * vd[j]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        dirty = True
            if dirty:
                # new pivot: smallest leftover in pivot row, then column
                best = None
                for j in range(t + 1, n):
                    x = a[t][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), t, j)
                for i in range(t + 1, m):
                    x = a[i][t]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, t)
                _, i, j = best
                if i != t:
                    swap_rows(i, t)
                if j != t:
                    swap_cols(j, t)
                continue
            bad = None
            for i in range(t + 1, m):
                row = a[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
            for row in ui:
                row[t] = -row[t]
        diag.append(a[t][t])
        t += 1
    return u, ui, v, vi, diag


def _from_lists(rows: list[list[int]], nrows: int, ncols: int) -> IntMatrix:
    return IntMatrix(nrows, ncols, tuple(x for r in rows for x in r))


@lru_cache(maxsize=8192)
def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Smith decomposition of ``A``.

    Pivots are the nonzero entries of least absolute value (ties to the
    smallest row, then column), which keeps the output deterministic.
    Empty matrices give identity/empty factors.
    """
    m, n = A.shape
    u, ui, v, vi, diag = _snf_lists(A.to_rows(), m, n)
    D = IntMatrix.diagonal(diag, m, n)
    return SmithDecomposition(
        U=_from_lists(u, m, m),
        D=D,
        V=_from_lists(v, n, n),
        U_inv=_from_lists(ui, m, m),
        V_inv=_from_lists(vi, n, n),
        rank=len(diag),
        _diag=tuple(diag),
    )


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of ``{x : A x = 0}``; shape ``cols x k``."""
    return smith_normal_form(A).kernel()


def solve_linear(A: IntMatrix, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Return an integer solution of ``A x = b`` or None if none exists."""
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {A.rows}")
    return smith_normal_form(A).solve(tuple(int(x) for x in b))


def rank(A: IntMatrix) -> int:
    return smith_normal_form(A).rank


def column_lattice_basis(A: IntMatrix) -> IntMatrix:
    return smith_normal_form(A).image_basis()


def determinantal_divisors(A: IntMatrix) -> list[int]:
    """gcd of all k x k minors for k = 1..min(rows, cols).

    Exponential in the matrix size; intended as an independent check on
    small inputs only.
    """
    from itertools import combinations

    out = []
    for k in range(1, min(A.rows, A.cols) + 1):
        g = 0
        for rs in combinations(range(A.rows), k):
            for cs in combinations(range(A.cols), k):
                g = gcd(g, A.select_rows(rs).select_cols(cs).determinant())
        out.append(g)
    return out
