"""Exact rank computation over the Gaussian rationals.

Two independent routes are kept deliberately separate:

* ``bareiss_rank``: fraction-free (Bareiss-style) elimination on the
  denominator-cleared Gaussian-integer matrix, sparse column-major storage,
  pivot column = shortest active column (ties by lowest index), pivot row =
  lowest active row index.  Deterministic.
* ``dense_rank``: naive dense Gaussian elimination straight over GQ with
  first-nonzero pivoting and no heuristics of any kind.  This is the
  cross-validation oracle and must stay simple.
"""

from __future__ import annotations

from math import gcd

from .exactalg import GQ


class SparseMatrix:
    """Immutable-by-convention sparse matrix of GQ entries."""

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows: int, ncols: int, entries=None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries = {}
        if entries:
            for (i, j), value in entries.items():
                value = GQ.of(value)
                if value.is_zero():
                    continue
                if not (0 <= i < nrows and 0 <= j < ncols):
                    raise IndexError(f"entry ({i},{j}) outside matrix")
                self.entries[(i, j)] = value

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def rows(self):
        """Dense row-major copy (GQ entries)."""
        zero = GQ(0)
        out = [[zero] * self.ncols for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def rank(self, method: str = "sparse") -> int:
        if method == "sparse":
            return bareiss_rank(self)
        if method == "oracle":
            return dense_rank(self.rows())
        raise ValueError(f"unknown rank method {method!r}")


# ----------------------------------------------------------------------
# dense oracle over GQ

def dense_rank(rows) -> int:
    """Rank by plain Gaussian elimination over GQ, first-nonzero pivots."""
    m = [list(map(GQ.of, row)) for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    rank = 0
    for col in range(ncols):
        pivot_row = None
        for r in range(rank, nrows):
            if not m[r][col].is_zero():
                pivot_row = r
                break
        if pivot_row is None:
            continue
        m[rank], m[pivot_row] = m[pivot_row], m[rank]
        pivot = m[rank][col]
        for r in range(rank + 1, nrows):
            factor = m[r][col]
            if factor.is_zero():
                continue
            scale = factor / pivot
            row_r = m[r]
            row_p = m[rank]
            for cc in range(col, ncols):
                if not row_p[cc].is_zero():
                    row_r[cc] = row_r[cc] - row_p[cc] * scale
        rank += 1
        if rank == nrows:
            break
    return rank


# ----------------------------------------------------------------------
# fraction-free sparse elimination over Z[i]

def _to_gaussian_int_columns(matrix: SparseMatrix):
    """Clear each row's denominators; return column-major dict of (a, b)
    Gaussian integers.  Row scaling leaves the rank unchanged."""
    row_lcm: dict = {}
    for (i, _), v in matrix.entries.items():
        d = row_lcm.get(i, 1)
        for part in (v.re, v.im):
            den = part.denominator
            d = d * den // gcd(d, den)
        row_lcm[i] = d
    cols: dict = {}
    for (i, j), v in matrix.entries.items():
        s = row_lcm[i]
        a = int(v.re * s)
        b = int(v.im * s)
        cols.setdefault(j, {})[i] = (a, b)
    return cols


def _zi_mul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _zi_sub(x, y):
    return (x[0] - y[0], x[1] - y[1])


def _zi_divexact(x, y):
    # exact division in Z[i]; Bareiss guarantees divisibility
    norm = y[0] * y[0] + y[1] * y[1]
    re = x[0] * y[0] + x[1] * y[1]
    im = x[1] * y[0] - x[0] * y[1]
    qr, rr = divmod(re, norm)
    qi, ri = divmod(im, norm)
    if rr or ri:
        raise ArithmeticError("non-exact division in fraction-free step")
    return (qr, qi)


def bareiss_rank(matrix: SparseMatrix) -> int:
    """Fraction-free rank of a sparse GQ matrix.

    Pivot column: fewest active nonzeros, ties by lowest column index.
    Pivot row: lowest active row index within the pivot column.
    """
    cols = _to_gaussian_int_columns(matrix)
    active_rows = set()
    for col in cols.values():
        active_rows.update(col)
    prev = (1, 0)
    rank = 0
    while True:
        pivot_col_idx = None
        best = None
        for j in sorted(cols):
            col = cols[j]
            if not col:
                continue
            size = len(col)
            if best is None or size < best:
                best = size
                pivot_col_idx = j
        if pivot_col_idx is None:
            return rank
        pivot_col = cols.pop(pivot_col_idx)
        pivot_row_idx = min(pivot_col)
        pivot = pivot_col[pivot_row_idx]
        active_rows.discard(pivot_row_idx)
        # Bareiss update: m'[i][j] = (pivot*m[i][j] - m[i][c]*m[r][j]) / prev
        for j, col in cols.items():
            head = col.pop(pivot_row_idx, None)
            touched = set(col) | (set(pivot_col) & active_rows
                                  if head is not None else set())
            for i in touched if head is not None else list(col):
                left = _zi_mul(pivot, col.get(i, (0, 0)))
                if head is not None:
                    down = pivot_col.get(i)
                    if down is not None:
                        left = _zi_sub(left, _zi_mul(down, head))
                value = _zi_divexact(left, prev)
                if value == (0, 0):
                    col.pop(i, None)
                else:
                    col[i] = value
        prev = pivot
        rank += 1


def kernel_dimension(matrix: SparseMatrix, method: str = "sparse") -> int:
    return matrix.ncols - matrix.rank(method)


def column_space_equal(a, b) -> bool:
    """Exact column-space equality of two dense GQ matrices of equal height."""
    if len(a) != len(b):
        raise ValueError("matrices must have the same number of rows")
    ra = dense_rank(a)
    rb = dense_rank(b)
    joined = [list(ra_row) + list(rb_row) for ra_row, rb_row in zip(a, b)]
    return ra == rb == dense_rank(joined)


def gq_mat_inverse(rows):
    """Exact inverse of a square GQ matrix by Gauss-Jordan.

    Raises SingularError on degenerate input.
    """
    from .errors import SingularError

    m = len(rows)
    a = [list(map(GQ.of, row)) + [GQ(1) if i == j else GQ(0)
                                  for j in range(m)]
         for i, row in enumerate(rows)]
    for col in range(m):
        pivot_row = None
        for r in range(col, m):
            if not a[r][col].is_zero():
                pivot_row = r
                break
        if pivot_row is None:
            raise SingularError("matrix is singular")
        a[col], a[pivot_row] = a[pivot_row], a[col]
        inv = GQ(1) / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(m):
            if r == col or a[r][col].is_zero():
                continue
            factor = a[r][col]
            a[r] = [x - y * factor for x, y in zip(a[r], a[col])]
    return [row[m:] for row in a]


# ----------------------------------------------------------------------
# matrices of polynomials (used for endomorphism fields and anchors)

def poly_zero_matrix(chart, nrows, ncols):
    from .exactalg import Poly
    return [[Poly.zero(chart) for _ in range(ncols)] for _ in range(nrows)]


def poly_identity(chart, m):
    from .exactalg import Poly
    rows = poly_zero_matrix(chart, m, m)
    for k in range(m):
        rows[k][k] = Poly.one(chart)
    return rows


def poly_mat_mul(a, b):
    from .exactalg import Poly
    if not a or not b:
        return []
    chart = a[0][0].chart
    inner = len(b)
    out = []
    for row in a:
        new_row = []
        for j in range(len(b[0])):
            acc = Poly.zero(chart)
            for k in range(inner):
                if not row[k].is_zero() and not b[k][j].is_zero():
                    acc = acc + row[k] * b[k][j]
            new_row.append(acc)
        out.append(new_row)
    return out


def poly_mat_transpose(a):
    return [list(col) for col in zip(*a)] if a else []


def poly_mat_scale(a, s):
    return [[entry.scale(s) for entry in row] for row in a]


def poly_mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def poly_mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def poly_mat_eq(a, b) -> bool:
    if len(a) != len(b):
        return False
    return all(len(ra) == len(rb) and all(x == y for x, y in zip(ra, rb))
               for ra, rb in zip(a, b))


def poly_mat_eval(a, point):
    """Evaluate a polynomial matrix at a rational point, giving GQ rows."""
    return [[entry.evaluate(point) for entry in row] for row in a]
