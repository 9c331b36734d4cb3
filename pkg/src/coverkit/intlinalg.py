"""Exact integer matrix algebra: normal forms, kernels, lattice bases, solving.

Everything here runs on Python's arbitrary-precision integers; no floats,
no overflow.  Matrices are immutable (tuples of tuples, row-major).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major.

    ``empty_cols`` records the column count when there are no rows, so that
    degenerate shapes like 0 x k stay well defined.
    """

    data: tuple[tuple[int, ...], ...]
    empty_cols: int = 0

    def __post_init__(self) -> None:
        widths = {len(r) for r in self.data}
        if len(widths) > 1:
            raise ValueError("ragged rows in matrix")
        for row in self.data:
            for x in row:
                if not isinstance(x, int):
                    raise ValueError(f"non-integer entry {x!r}")

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], cols: int = 0) -> "IntMatrix":
        return IntMatrix(tuple(tuple(int(x) for x in r) for r in rows), cols)

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @staticmethod
    def zero(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(0 for _ in range(cols)) for _ in range(rows)), cols)

    @staticmethod
    def from_columns(cols: Sequence[Sequence[int]], rows: int | None = None) -> "IntMatrix":
        """Matrix whose columns are the given vectors.

        ``rows`` is required when ``cols`` is empty (shape would be ambiguous).
        """
        if not cols:
            if rows is None:
                raise ValueError("empty column list needs an explicit row count")
            return IntMatrix(tuple(() for _ in range(rows)))
        n = len(cols[0])
        if n == 0:
            return IntMatrix((), len(cols))
        return IntMatrix(tuple(tuple(int(c[i]) for c in cols) for i in range(n)))

    @property
    def rows(self) -> int:
        return len(self.data)

    @property
    def cols(self) -> int:
        return len(self.data[0]) if self.data else self.empty_cols

    def row(self, i: int) -> tuple[int, ...]:
        return self.data[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        if not self.data:
            return IntMatrix(tuple(() for _ in range(self.empty_cols)))
        if self.cols == 0:
            return IntMatrix((), self.rows)
        return IntMatrix(tuple(tuple(self.data[i][j] for i in range(self.rows)) for j in range(self.cols)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        if self.rows == 0:
            return IntMatrix((), other.cols)
        ot = other.transpose().data
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in ot) for row in self.data),
            other.cols,
        )

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        if self.cols != len(vec):
            raise ValueError(f"vector length {len(vec)} does not match {self.rows}x{self.cols}")
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self.data)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch in hstack")
        return IntMatrix(tuple(r1 + r2 for r1, r2 in zip(self.data, other.data)), self.cols + other.cols)

    def scaled(self, c: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(c * x for x in r) for r in self.data), self.empty_cols)

    def __neg__(self) -> "IntMatrix":
        return self.scaled(-1)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in addition")
        return IntMatrix(
            tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.data, other.data)),
            self.empty_cols,
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        n = self.rows
        if n != self.cols:
            raise ValueError("determinant of a non-square matrix")
        if n == 0:
            return 1
        a = [list(r) for r in self.data]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(str(x) for x in r) for r in self.data) + "]"


@dataclass(frozen=True)
class SmithForm:
    """U @ M @ V == D with U, V unimodular and D diagonal, d1 | d2 | ..."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        n = min(self.D.rows, self.D.cols)
        return tuple(self.D.data[i][i] for i in range(n))


def _pick_pivot(a: list[list[int]], t: int, rows: int, cols: int) -> tuple[int, int] | None:
    """Smallest nonzero |entry| in the trailing submatrix; ties go to the
    lowest (row, col).  Fixed rule so normal forms are reproducible."""
    best: tuple[int, int, int] | None = None
    for i in range(t, rows):
        for j in range(t, cols):
            v = abs(a[i][j])
            if v != 0 and (best is None or v < best[0]):
                best = (v, i, j)
    if best is None:
        return None
    return best[1], best[2]


def smith_normal_form(m: IntMatrix) -> SmithForm:
    """Smith normal form with transforms: U @ m @ V = D.

    D is diagonal with nonnegative entries forming a divisibility chain;
    U and V have determinant +-1.
    """
    rows, cols = m.rows, m.cols
    a = [list(r) for r in m.data]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def row_sub(i: int, k: int, q: int) -> None:  # row_i -= q * row_k
        a[i] = [x - q * y for x, y in zip(a[i], a[k])]
        u[i] = [x - q * y for x, y in zip(u[i], u[k])]

    def col_sub(j: int, k: int, q: int) -> None:  # col_j -= q * col_k
        for r in a:
            r[j] -= q * r[k]
        for r in v:
            r[j] -= q * r[k]

    def row_swap(i: int, k: int) -> None:
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]

    def col_swap(j: int, k: int) -> None:
        for r in a:
            r[j], r[k] = r[k], r[j]
        for r in v:
            r[j], r[k] = r[k], r[j]

    t = 0
    limit = min(rows, cols)
    while t < limit:
        pos = _pick_pivot(a, t, rows, cols)
        if pos is None:
            break
        pi, pj = pos
        if pi != t:
            row_swap(pi, t)
        if pj != t:
            col_swap(pj, t)
        # Reduce until the pivot cleanly divides its row, its column, and
        # every remaining entry of the submatrix.
        while True:
            d = a[t][t]
            dirty = False
            for i in range(rows):
                if i != t and a[i][t] != 0:
                    row_sub(i, t, a[i][t] // d)
                    dirty = dirty or a[i][t] != 0
            for j in range(cols):
                if j != t and a[t][j] != 0:
                    col_sub(j, t, a[t][j] // d)
                    dirty = dirty or a[t][j] != 0
            if dirty:
                pos = _pick_pivot(a, t, rows, cols)
                assert pos is not None
                pi, pj = pos
                if pi != t:
                    row_swap(pi, t)
                if pj != t:
                    col_swap(pj, t)
                continue
            d = a[t][t]
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % d != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_sub(t, offender, -1)  # pull the bad row in and keep reducing
        t += 1
    for i in range(limit):
        if a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            u[i] = [-x for x in u[i]]
    return SmithForm(
        IntMatrix.from_rows(u, cols=rows),
        IntMatrix.from_rows(a, cols=cols),
        IntMatrix.from_rows(v, cols=cols),
    )


def row_hermite_form(m: IntMatrix) -> IntMatrix:
    """Row-style Hermite normal form (canonical basis of the row lattice).

    Pivots are positive, entries above a pivot are reduced into [0, pivot),
    zero rows are dropped.
    """
    rows = [list(r) for r in m.data]
    nrows, ncols = m.rows, m.cols
    pivot_row = 0
    for col in range(ncols):
        while True:
            nz = [i for i in range(pivot_row, nrows) if rows[i][col] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda i: abs(rows[i][col]))
            i0 = nz[0]
            for i in nz[1:]:
                q = rows[i][col] // rows[i0][col]
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[i0])]
        nz = [i for i in range(pivot_row, nrows) if rows[i][col] != 0]
        if not nz:
            continue
        i0 = nz[0]
        rows[pivot_row], rows[i0] = rows[i0], rows[pivot_row]
        if rows[pivot_row][col] < 0:
            rows[pivot_row] = [-x for x in rows[pivot_row]]
        p = rows[pivot_row][col]
        for i in range(pivot_row):
            q = rows[i][col] // p
            if q:
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[pivot_row])]
        pivot_row += 1
    return IntMatrix.from_rows(rows[:pivot_row], cols=ncols)


def lattice_basis(generators: IntMatrix) -> IntMatrix:
    """Canonical basis (as columns) of the lattice spanned by the columns."""
    h = row_hermite_form(generators.transpose())
    if h.rows == 0:
        return IntMatrix.from_columns([], rows=generators.rows)
    return h.transpose()


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Canonical basis (as columns) of the integer kernel {x : m @ x = 0}."""
    snf = smith_normal_form(m)
    diag = snf.diagonal
    free_cols = [j for j in range(m.cols) if j >= len(diag) or diag[j] == 0]
    cols = [snf.V.column(j) for j in free_cols]
    if not cols:
        return IntMatrix.from_columns([], rows=m.cols)
    return lattice_basis(IntMatrix.from_columns(cols))


def solve(m: IntMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """One integer solution of m @ x = b, or None if there is none."""
    if len(b) != m.rows:
        raise ValueError("right-hand side length mismatch")
    snf = smith_normal_form(m)
    c = snf.U.apply(b)
    diag = snf.diagonal
    y = [0] * m.cols
    for i in range(m.rows):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d != 0:
                return None
            y[i] = c[i] // d
    return snf.V.apply(y)


def solve_matrix(m: IntMatrix, rhs: IntMatrix) -> IntMatrix | None:
    """Integer X with m @ X = rhs, or None (solved column by column)."""
    cols = []
    for j in range(rhs.cols):
        x = solve(m, rhs.column(j))
        if x is None:
            return None
        cols.append(x)
    return IntMatrix.from_columns(cols, rows=m.cols)


def inverse_unimodular(m: IntMatrix) -> IntMatrix:
    """Inverse of a matrix with determinant +-1 (exact, by rational elimination)."""
    n = m.rows
    if n != m.cols:
        raise ValueError("inverse of a non-square matrix")
    aug = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
           for i, row in enumerate(m.data)]
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            x = aug[i][n + j]
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular")
            row.append(int(x))
        out.append(row)
    return IntMatrix.from_rows(out, cols=n)


def matrix_rank(m: IntMatrix) -> int:
    return sum(1 for d in smith_normal_form(m).diagonal if d != 0)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def mod_kernel_basis(m: IntMatrix, modulus: int) -> IntMatrix:
    """Canonical basis of the full-rank lattice {x : m @ x == 0 mod modulus}."""
    if modulus < 1:
        raise ValueError("modulus must be >= 1")
    snf = smith_normal_form(m)
    diag = snf.diagonal
    cols = []
    for j in range(m.cols):
        d = diag[j] if j < len(diag) else 0
        scale = modulus // _gcd(modulus, d) if d else 1
        e = [0] * m.cols
        e[j] = scale
        cols.append(snf.V.apply(e))
    return lattice_basis(IntMatrix.from_columns(cols, rows=m.cols))
