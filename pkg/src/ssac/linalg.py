"""Dense linear algebra over GF(2^w).

Matrices and vectors wrap uint8 numpy arrays together with the
:class:`~ssac.gf.FieldSpec` they live in.  Row reduction is vectorised
through the field's multiplication table, so ranks and solves stay fast
enough for Monte-Carlo use while remaining exact.
"""

from __future__ import annotations

import numpy as np

from .gf import FieldMismatchError, FieldSpec


def _as_field_array(field: FieldSpec, data, ndim: int) -> np.ndarray:
    arr = np.asarray(data)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-dimensional array, got shape {arr.shape}")
    if arr.size and (arr.min() < 0 or arr.max() >= field.order):
        raise FieldMismatchError(f"values outside [0, {field.order}) for {field!r}")
    return arr.astype(np.uint8, copy=True)


class GfVector:
    """A vector of field elements."""

    def __init__(self, field: FieldSpec, data):
        self.field = field
        self.data = _as_field_array(field, data, 1)

    def __len__(self) -> int:
        return self.data.shape[0]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GfVector)
            and other.field == self.field
            and np.array_equal(other.data, self.data)
        )

    def __repr__(self) -> str:
        return f"GfVector({self.field!r}, {self.data.tolist()})"

    def tolist(self) -> list[int]:
        return self.data.tolist()


class GfMatrix:
    """A row-major matrix of field elements."""

    def __init__(self, field: FieldSpec, data):
        self.field = field
        self.data = _as_field_array(field, data, 2)

    @classmethod
    def from_rows(cls, field: FieldSpec, rows) -> GfMatrix:
        return cls(field, [list(r) for r in rows])

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> GfMatrix:
        return cls(field, np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> GfMatrix:
        return cls(field, np.eye(n, dtype=np.uint8))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def row(self, i: int) -> GfVector:
        return GfVector(self.field, self.data[i])

    def transpose(self) -> GfMatrix:
        return GfMatrix(self.field, self.data.T)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GfMatrix)
            and other.field == self.field
            and np.array_equal(other.data, self.data)
        )

    def __repr__(self) -> str:
        return f"GfMatrix({self.field!r}, shape={self.data.shape})"


def _rref(field: FieldSpec, work: np.ndarray, pivot_limit: int | None = None):
    """In-place reduced row echelon form.

    Pivots are searched column by column from the left, restricted to the
    first ``pivot_limit`` columns.  Returns the list of pivot columns;
    pivot i lives in row i.
    """
    rows, cols = work.shape
    limit = cols if pivot_limit is None else pivot_limit
    mul = field.mul_table
    inv = field.inv_table
    pivots: list[int] = []
    pr = 0
    for col in range(limit):
        if pr == rows:
            break
        below = np.nonzero(work[pr:, col])[0]
        if below.size == 0:
            continue
        src = pr + int(below[0])
        if src != pr:
            work[[pr, src]] = work[[src, pr]]
        lead = work[pr, col]
        if lead != 1:  # pivot is nonzero by construction
            work[pr] = mul[inv[lead], work[pr]]
        factors = work[:, col].copy()
        factors[pr] = 0
        targets = np.nonzero(factors)[0]
        if targets.size:
            work[targets] ^= mul[factors[targets, None], work[pr][None, :]]
        pivots.append(col)
        pr += 1
    return pivots


def rank(mat: GfMatrix) -> int:
    work = mat.data.copy()
    return len(_rref(mat.field, work))


def mat_vec_left(x: GfVector, mat: GfMatrix) -> GfVector:
    """Row combination x . mat for a length-rows vector x."""
    if x.field != mat.field:
        raise FieldMismatchError("vector and matrix live in different fields")
    if len(x) != mat.rows:
        raise ValueError(f"vector length {len(x)} != row count {mat.rows}")
    if mat.rows == 0:
        return GfVector(mat.field, np.zeros(mat.cols, dtype=np.uint8))
    products = mat.field.mul_table[x.data[:, None], mat.data]
    return GfVector(mat.field, np.bitwise_xor.reduce(products, axis=0))


def mat_mul(a: GfMatrix, b: GfMatrix) -> GfMatrix:
    if a.field != b.field:
        raise FieldMismatchError("matrices live in different fields")
    if a.cols != b.rows:
        raise ValueError(f"inner dimensions differ: {a.cols} vs {b.rows}")
    mul = a.field.mul_table
    out = np.zeros((a.rows, b.cols), dtype=np.uint8)
    for i in range(a.rows):
        products = mul[a.data[i][:, None], b.data]
        out[i] = np.bitwise_xor.reduce(products, axis=0) if b.rows else 0
    return GfMatrix(a.field, out)


def left_solve(mat: GfMatrix, target: GfVector) -> GfVector | None:
    """Solve x . mat = target, or None when target is outside the row space.

    The system is solved on the transpose; free variables are pinned to
    zero with pivots taken in column order, so the returned combiner is
    deterministic.
    """
    if target.field != mat.field:
        raise FieldMismatchError("vector and matrix live in different fields")
    if len(target) != mat.cols:
        raise ValueError(f"target length {len(target)} != column count {mat.cols}")
    k = mat.rows
    aug = np.concatenate([mat.data.T, target.data[:, None]], axis=1)
    pivots = _rref(mat.field, aug, pivot_limit=k)
    r = len(pivots)
    if np.any(aug[r:, k]):
        return None
    x = np.zeros(k, dtype=np.uint8)
    for i, col in enumerate(pivots):
        x[col] = aug[i, k]
    return GfVector(mat.field, x)


def solve_full_rank(a: GfMatrix, b: GfMatrix) -> GfMatrix | None:
    """Solve a . X = b when a has full column rank, else None.

    ``a`` may have more rows than columns; any extra rows are assumed to
    be consistent combinations of the independent ones.
    """
    if a.field != b.field:
        raise FieldMismatchError("matrices live in different fields")
    if a.rows != b.rows:
        raise ValueError(f"row counts differ: {a.rows} vs {b.rows}")
    n = a.cols
    aug = np.concatenate([a.data, b.data], axis=1)
    pivots = _rref(a.field, aug, pivot_limit=n)
    if len(pivots) < n:
        return None
    # full column rank forces pivots == [0..n-1], so rows 0..n-1 hold X
    return GfMatrix(a.field, aug[:n, n:])


def invert_and_apply(a: GfMatrix, b: GfMatrix) -> GfMatrix | None:
    """a^{-1} . b for square a, or None when a is singular."""
    if a.rows != a.cols:
        raise ValueError(f"matrix is {a.rows}x{a.cols}, expected square")
    return solve_full_rank(a, b)


class RowSpace:
    """Membership oracle for the row space of a fixed matrix.

    The matrix is reduced once; membership queries then cost a handful of
    vector XORs against a null-space basis, which keeps the recoding
    search loop cheap.  Agreement with :func:`left_solve` is exact: a
    vector passes iff the solver would return a combiner for it.
    """

    def __init__(self, mat: GfMatrix):
        self.field = mat.field
        self.ncols = mat.cols
        work = mat.data.copy()
        pivots = _rref(self.field, work)
        self.rank = len(pivots)
        free = [c for c in range(self.ncols) if c not in set(pivots)]
        self.null_dim = len(free)
        basis = np.zeros((self.null_dim, self.ncols), dtype=np.uint8)
        if free:
            basis[np.arange(self.null_dim), free] = 1
            if pivots:
                basis[:, pivots] = work[: self.rank, free].T
        basis.setflags(write=False)
        self._basis_t = basis.T.copy()  # position-indexed rows
        self._scaled: dict[int, np.ndarray] = {}

    def scaled_basis_t(self, value: int) -> np.ndarray:
        """Null-space basis transposed and scaled by a fixed field value."""
        cached = self._scaled.get(value)
        if cached is None:
            cached = self.field.mul_table[value][self._basis_t]
            cached.setflags(write=False)
            self._scaled[value] = cached
        return cached

    def contains_entries(self, entries) -> bool:
        """Membership for a sparse vector given as (position, value) pairs."""
        acc = np.zeros(self.null_dim, dtype=np.uint8)
        for pos, value in entries:
            acc ^= self.scaled_basis_t(value)[pos]
        return not acc.any()

    def contains(self, vec: GfVector) -> bool:
        if len(vec) != self.ncols:
            raise ValueError(f"vector length {len(vec)} != column count {self.ncols}")
        positions = np.nonzero(vec.data)[0]
        return self.contains_entries(
            (int(p), int(vec.data[p])) for p in positions
        )
