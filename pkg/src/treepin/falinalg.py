"""Dense exact linear algebra over finite field contexts.

Matrices are immutable row-major grids of FieldElem sharing one context.
Everything here is plain Gaussian elimination with deterministic pivoting
(first nonzero entry scanning top to bottom), so repeated runs produce
identical results.  No floats anywhere.
"""

from __future__ import annotations

from typing import Callable, Iterable, NamedTuple, Sequence

from .gfield import ExtFieldCtx, FieldElem, make_ext_field

__all__ = [
    "FMatrix",
    "RrefResult",
    "rref",
    "rank",
    "det",
    "inverse",
    "left_inverse",
    "solve_right",
    "right_nullspace_basis",
    "left_nullspace_basis",
    "col_space_intersect",
    "in_col_span",
    "lift",
    "expand_to_base",
    "vec_mat_mul",
    "mat_vec_mul",
]


class FMatrix:
    """Immutable matrix over one ExtFieldCtx."""

    __slots__ = ("ctx", "rows", "cols", "_data")

    def __init__(self, ctx: ExtFieldCtx, data: Iterable[Iterable[FieldElem]], cols: int | None = None):
        grid = tuple(tuple(row) for row in data)
        if grid:
            width = len(grid[0])
            for row in grid:
                if len(row) != width:
                    raise ValueError("ragged rows")
                for e in row:
                    if not isinstance(e, FieldElem) or e.ctx.key != ctx.key:
                        raise ValueError("entry does not belong to the matrix field")
            if cols is not None and cols != width:
                raise ValueError("cols does not match row width")
            cols = width
        elif cols is None:
            cols = 0
        self.ctx = ctx
        self.rows = len(grid)
        self.cols = cols
        self._data = grid

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_rows(cls, ctx: ExtFieldCtx, rows: Sequence[Sequence], cols: int | None = None) -> "FMatrix":
        """Build from rows whose entries are coerced through ctx(...)."""
        return cls(ctx, [[ctx(v) for v in row] for row in rows], cols=cols)

    @classmethod
    def from_cols(cls, ctx: ExtFieldCtx, cols: Sequence[Sequence], rows: int | None = None) -> "FMatrix":
        grid = [[ctx(v) for v in col] for col in cols]
        if grid:
            return cls(ctx, list(zip(*grid)), cols=len(grid))
        if rows is None:
            raise ValueError("rows required for a matrix with no columns")
        return cls(ctx, [[] for _ in range(rows)], cols=0)

    @classmethod
    def zeros(cls, ctx: ExtFieldCtx, rows: int, cols: int) -> "FMatrix":
        z = ctx.zero
        return cls(ctx, [[z] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, ctx: ExtFieldCtx, n: int) -> "FMatrix":
        z, o = ctx.zero, ctx.one
        return cls(ctx, [[o if i == j else z for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def basis_columns(cls, ctx: ExtFieldCtx, rows: int, indices: Sequence[int]) -> "FMatrix":
        """Selector matrix whose j-th column is the standard basis vector
        at indices[j]."""
        z, o = ctx.zero, ctx.one
        return cls(
            ctx,
            [[o if i == r else z for r in indices] for i in range(rows)],
            cols=len(indices),
        )

    @classmethod
    def build(cls, ctx: ExtFieldCtx, rows: int, cols: int, fn: Callable[[int, int], FieldElem]) -> "FMatrix":
        return cls(ctx, [[fn(i, j) for j in range(cols)] for i in range(rows)], cols=cols)

    # -- access ------------------------------------------------------------

    def __getitem__(self, key: tuple[int, int]) -> FieldElem:
        i, j = key
        return self._data[i][j]

    def row(self, i: int) -> tuple[FieldElem, ...]:
        return self._data[i]

    def col(self, j: int) -> tuple[FieldElem, ...]:
        return tuple(r[j] for r in self._data)

    def row_list(self) -> list[list[FieldElem]]:
        """Mutable copy of the grid, for elimination kernels."""
        return [list(r) for r in self._data]

    def to_code_rows(self) -> list[list[int]]:
        return [[e.code for e in r] for r in self._data]

    # -- shape surgery -----------------------------------------------------

    def transpose(self) -> "FMatrix":
        if self.rows == 0:
            return FMatrix(self.ctx, [[] for _ in range(self.cols)], cols=0)
        return FMatrix(self.ctx, list(zip(*self._data)), cols=self.rows)

    def hstack(self, *others: "FMatrix") -> "FMatrix":
        mats = (self, *others)
        for m in others:
            if m.rows != self.rows:
                raise ValueError("row count mismatch in hstack")
            if m.ctx.key != self.ctx.key:
                raise ValueError("field mismatch in hstack")
        total = sum(m.cols for m in mats)
        grid = [
            tuple(e for m in mats for e in (m._data[i] if m.cols else ()))
            for i in range(self.rows)
        ]
        return FMatrix(self.ctx, grid, cols=total)

    def vstack(self, *others: "FMatrix") -> "FMatrix":
        for m in others:
            if m.cols != self.cols:
                raise ValueError("column count mismatch in vstack")
            if m.ctx.key != self.ctx.key:
                raise ValueError("field mismatch in vstack")
        grid = list(self._data)
        for m in others:
            grid.extend(m._data)
        return FMatrix(self.ctx, grid, cols=self.cols)

    def take_rows(self, indices: Iterable[int]) -> "FMatrix":
        return FMatrix(self.ctx, [self._data[i] for i in indices], cols=self.cols)

    def take_cols(self, indices: Sequence[int]) -> "FMatrix":
        return FMatrix(
            self.ctx,
            [[r[j] for j in indices] for r in self._data],
            cols=len(indices),
        )

    # -- arithmetic ----------------------------------------------------------

    def __matmul__(self, other: "FMatrix") -> "FMatrix":
        if not isinstance(other, FMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
        if self.ctx.key != other.ctx.key:
            raise ValueError("field mismatch in matmul")
        ctx = self.ctx
        zero = ctx.zero
        if self.cols == 0 or other.cols == 0:
            return FMatrix.zeros(ctx, self.rows, other.cols)
        ocols = list(zip(*other._data))
        grid = []
        for arow in self._data:
            out = []
            for bcol in ocols:
                acc = zero
                for a, b in zip(arow, bcol):
                    if a.code and b.code:
                        acc = acc + a * b
                out.append(acc)
            grid.append(tuple(out))
        return FMatrix(ctx, grid, cols=other.cols)

    def __add__(self, other: "FMatrix") -> "FMatrix":
        if not isinstance(other, FMatrix):
            return NotImplemented
        if self.shape != other.shape or self.ctx.key != other.ctx.key:
            raise ValueError("shape or field mismatch in add")
        return FMatrix(
            self.ctx,
            [
                tuple(a + b for a, b in zip(r1, r2))
                for r1, r2 in zip(self._data, other._data)
            ],
            cols=self.cols,
        )

    def __neg__(self) -> "FMatrix":
        return FMatrix(
            self.ctx, [tuple(-e for e in r) for r in self._data], cols=self.cols
        )

    def __sub__(self, other: "FMatrix") -> "FMatrix":
        return self.__add__(-other)

    def scale(self, f: FieldElem) -> "FMatrix":
        return FMatrix(
            self.ctx, [tuple(f * e for e in r) for r in self._data], cols=self.cols
        )

    # -- misc ----------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return all(not e for r in self._data for e in r)

    def __eq__(self, other):
        if not isinstance(other, FMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and self.ctx.key == other.ctx.key
            and all(
                a.code == b.code
                for r1, r2 in zip(self._data, other._data)
                for a, b in zip(r1, r2)
            )
        )

    def __hash__(self):
        return hash((self.shape, self.ctx.key, tuple(e.code for r in self._data for e in r)))

    def __repr__(self):
        return f"FMatrix({self.rows}x{self.cols} over GF({self.ctx.q}^{self.ctx.n}))"


class RrefResult(NamedTuple):
    matrix: FMatrix
    pivots: tuple[int, ...]
    rank: int


def rref(m: FMatrix, pivot_cols: int | None = None) -> RrefResult:
    """Reduced row echelon form.

    Pivots are searched only within the first pivot_cols columns (all
    columns by default), but the whole row is reduced; this is what makes
    [A | B] style augmented eliminations work.
    """
    limit = m.cols if pivot_cols is None else pivot_cols
    data = m.row_list()
    nrows = m.rows
    pivots: list[int] = []
    prow = 0
    for c in range(limit):
        pr = None
        for i in range(prow, nrows):
            if data[i][c].code:
                pr = i
                break
        if pr is None:
            continue
        data[prow], data[pr] = data[pr], data[prow]
        pv = data[prow][c]
        if pv.code != 1:
            pinv = pv.inv()
            data[prow] = [pinv * v for v in data[prow]]
        prow_vals = data[prow]
        for i in range(nrows):
            if i != prow and data[i][c].code:
                f = data[i][c]
                data[i] = [a - f * b for a, b in zip(data[i], prow_vals)]
        pivots.append(c)
        prow += 1
        if prow == nrows:
            break
    return RrefResult(FMatrix(m.ctx, data, cols=m.cols), tuple(pivots), len(pivots))


def rank(m: FMatrix) -> int:
    """Matrix rank via forward elimination (no back substitution)."""
    data = m.row_list()
    nrows, ncols = m.rows, m.cols
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if data[i][c].code:
                pr = i
                break
        if pr is None:
            continue
        data[r], data[pr] = data[pr], data[r]
        pv_inv = data[r][c].inv()
        prow = data[r]
        for i in range(r + 1, nrows):
            if data[i][c].code:
                f = data[i][c] * pv_inv
                row = data[i]
                # entries left of c are already zero
                data[i] = row[:c] + [a - f * b for a, b in zip(row[c:], prow[c:])]
        r += 1
        if r == nrows:
            break
    return r


def det(m: FMatrix) -> FieldElem:
    """Determinant (exact, via forward elimination with pivot tracking)."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    ctx = m.ctx
    n = m.rows
    if n == 0:
        return ctx.one
    data = m.row_list()
    result = ctx.one
    negate = False
    for c in range(n):
        pr = None
        for i in range(c, n):
            if data[i][c].code:
                pr = i
                break
        if pr is None:
            return ctx.zero
        if pr != c:
            data[c], data[pr] = data[pr], data[c]
            negate = not negate
        pv = data[c][c]
        result = result * pv
        pv_inv = pv.inv()
        prow = data[c]
        for i in range(c + 1, n):
            if data[i][c].code:
                f = data[i][c] * pv_inv
                row = data[i]
                data[i] = row[:c] + [a - f * b for a, b in zip(row[c:], prow[c:])]
    return -result if negate else result


def inverse(m: FMatrix) -> FMatrix:
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    r = rref(m.hstack(FMatrix.identity(m.ctx, n)), pivot_cols=n)
    if r.rank < n:
        raise ValueError("matrix is singular")
    return r.matrix.take_cols(range(n, 2 * n))


def left_inverse(m: FMatrix) -> FMatrix:
    """E with E @ m = identity; requires full column rank."""
    r = rref(m.hstack(FMatrix.identity(m.ctx, m.rows)), pivot_cols=m.cols)
    if r.rank < m.cols:
        raise ValueError("matrix does not have full column rank")
    return r.matrix.take_rows(range(m.cols)).take_cols(
        range(m.cols, m.cols + m.rows)
    )


def solve_right(a: FMatrix, b: FMatrix) -> FMatrix | None:
    """A particular X with a @ X = b, or None when the system is
    inconsistent.  Free variables are set to zero."""
    if not isinstance(b, FMatrix):
        raise ValueError("right-hand side must be an FMatrix")
    if a.rows != b.rows:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a.ctx.key != b.ctx.key:
        raise ValueError("field mismatch in solve_right")
    r = rref(a.hstack(b), pivot_cols=a.cols)
    red = r.matrix
    for i in range(r.rank, a.rows):
        for j in range(a.cols, a.cols + b.cols):
            if red[i, j].code:
                return None
    zero = a.ctx.zero
    grid = [[zero] * b.cols for _ in range(a.cols)]
    for k, c in enumerate(r.pivots):
        grid[c] = list(red.row(k)[a.cols : a.cols + b.cols])
    return FMatrix(a.ctx, grid, cols=b.cols)


def right_nullspace_basis(m: FMatrix) -> FMatrix:
    """Columns form a basis of {x : m @ x = 0}.  Shape cols x nullity."""
    r = rref(m)
    pivotset = set(r.pivots)
    free = [c for c in range(m.cols) if c not in pivotset]
    zero, one = m.ctx.zero, m.ctx.one
    cols = []
    for f in free:
        v = [zero] * m.cols
        v[f] = one
        for k, pc in enumerate(r.pivots):
            v[pc] = -r.matrix[k, f]
        cols.append(v)
    return FMatrix.from_cols(m.ctx, cols, rows=m.cols)


def left_nullspace_basis(m: FMatrix) -> FMatrix:
    """Rows form a basis of {y : y @ m = 0}.  Shape (rows - rank) x rows."""
    return right_nullspace_basis(m.transpose()).transpose()


def col_space_intersect(a: FMatrix, b: FMatrix) -> FMatrix:
    """Basis (as columns) of col(a) intersected with col(b).

    Zassenhaus block trick: row reduce [[a^T a^T], [b^T 0]]; rows whose left
    half vanished carry a basis of the intersection in their right half.
    """
    if a.rows != b.rows:
        raise ValueError("ambient dimension mismatch")
    if a.ctx.key != b.ctx.key:
        raise ValueError("field mismatch")
    d = a.rows
    zero = a.ctx.zero
    block_rows = []
    for j in range(a.cols):
        col = list(a.col(j))
        block_rows.append(col + col)
    for j in range(b.cols):
        col = list(b.col(j))
        block_rows.append(col + [zero] * d)
    z = FMatrix(a.ctx, block_rows, cols=2 * d)
    r = rref(z)
    cols = []
    for i in range(r.rank):
        row = r.matrix.row(i)
        if all(not e for e in row[:d]):
            right = row[d:]
            if any(e.code for e in right):
                cols.append(list(right))
    return FMatrix.from_cols(a.ctx, cols, rows=d)


def in_col_span(a: FMatrix, v: FMatrix) -> bool:
    """True when every column of v lies in the column space of a."""
    if v.cols == 0:
        return True
    return rank(a.hstack(v)) == rank(a)


def lift(m: FMatrix, ext: ExtFieldCtx) -> FMatrix:
    """Embed a base-field matrix entrywise into an extension context.

    Constant polynomials keep their codes, so this is code-preserving; it
    also preserves rank (Gaussian elimination over the subfield is valid
    over the extension).
    """
    if m.ctx.n != 1:
        raise ValueError("lift expects a matrix over a prime field")
    if ext.q != m.ctx.q:
        raise ValueError("characteristic mismatch in lift")
    return FMatrix(
        ext,
        [tuple(FieldElem(ext, e.code) for e in row) for row in m._data],
        cols=m.cols,
    )


def expand_to_base(m: FMatrix) -> FMatrix:
    """Rewrite a matrix over GF(q**n) as its base-field realisation.

    Each coordinate of the domain and codomain is replaced by n base-field
    coordinates (the coefficients on the power basis 1, x, ..., x^(n-1)).
    Entry a becomes the n x n block R with R[r][c] = coeff_c(x^r * a), so a
    row vector of coefficient blocks times the result reproduces the
    original product coefficientwise.  Shape (rows*n) x (cols*n).
    """
    ctx = m.ctx
    n = ctx.n
    base = make_ext_field(ctx.q, 1)
    grid = [[base.zero] * (m.cols * n) for _ in range(m.rows * n)]
    for i in range(m.rows):
        for j in range(m.cols):
            a = m[i, j].code
            if not a:
                continue
            for r in range(n):
                # x^r has code q**r by the digit encoding
                prod = ctx.mul_code(ctx.encode([0] * r + [1]), a)
                coeffs = ctx.decode(prod)
                for c in range(n):
                    if coeffs[c]:
                        grid[i * n + r][j * n + c] = FieldElem(base, coeffs[c])
    return FMatrix(base, grid, cols=m.cols * n)


def vec_mat_mul(vec: Sequence[FieldElem], m: FMatrix) -> tuple[FieldElem, ...]:
    """Row vector times matrix."""
    if len(vec) != m.rows:
        raise ValueError("vector length does not match row count")
    ctx = m.ctx
    out = [ctx.zero] * m.cols
    for x, row in zip(vec, m._data):
        if x.code:
            for j, e in enumerate(row):
                if e.code:
                    out[j] = out[j] + x * e
    return tuple(out)


def mat_vec_mul(m: FMatrix, vec: Sequence[FieldElem]) -> tuple[FieldElem, ...]:
    """Matrix times column vector."""
    if len(vec) != m.cols:
        raise ValueError("vector length does not match column count")
    ctx = m.ctx
    out = []
    for row in m._data:
        acc = ctx.zero
        for e, x in zip(row, vec):
            if e.code and x.code:
                acc = acc + e * x
        out.append(acc)
    return tuple(out)
