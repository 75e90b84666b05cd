"""Row reduction over F_p.

:class:`RowBasis` keeps its rows in reduced row-echelon form, so a new row
is reduced against the whole basis with a single matrix-vector product.
Because the RREF of a row space is unique, the stored basis does not
depend on insertion order or on how rows were batched.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DimensionMismatch

_FLOAT_EXACT = 1 << 53
_INT_EXACT = 1 << 63


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """``a @ b mod p`` for canonical int64 operands, without overflow."""
    inner = a.shape[1]
    if inner == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    sq = (p - 1) ** 2
    if inner * sq < _FLOAT_EXACT:
        # BLAS path; exact because every partial sum stays below 2**53.
        return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64) % p
    chunk = max(1, (_INT_EXACT - 1) // max(sq, 1) - 1)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(0, inner, chunk):
        part = a[:, k : k + chunk] @ b[k : k + chunk]
        out = (out + part % p) % p
    return out


@dataclass(frozen=True)
class SparseRow:
    """Sorted column indices; ``vals`` defaults to all ones (an indicator row)."""

    cols: np.ndarray
    vals: Optional[np.ndarray] = None

    @classmethod
    def of(cls, row) -> "SparseRow":
        if isinstance(row, SparseRow):
            return row
        return cls(np.asarray(row, dtype=np.int64))

    def to_dense(self, dim: int, p: int) -> np.ndarray:
        cols = np.asarray(self.cols, dtype=np.int64)
        if cols.size and (cols.min() < 0 or cols.max() >= dim):
            raise DimensionMismatch(f"column index out of range for dimension {dim}")
        dense = np.zeros(dim, dtype=np.int64)
        if self.vals is None:
            np.add.at(dense, cols, 1)
        else:
            np.add.at(dense, cols, np.asarray(self.vals, dtype=np.int64) % p)
        return dense % p


@dataclass(frozen=True)
class RankResult:
    rank: int
    early_exit: bool
    rows_consumed: int


class RowBasis:
    """Growing row basis in reduced row-echelon form.

    ``rows[:rank]`` hold the basis; row ``k`` has a 1 at ``pivots[k]`` and
    zeros at every other pivot column.
    """

    def __init__(self, dim: int, p: int):
        self.dim = dim
        self.p = p
        self._buf = np.zeros((0, dim), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def rows(self) -> np.ndarray:
        return self._buf[: self.rank]

    def reduce(self, vec: np.ndarray, start: int = 0) -> np.ndarray:
        """Residual of ``vec`` (or of each row of a 2-D block) modulo the basis.

        ``start`` skips basis rows below that index; the caller guarantees
        ``vec`` is already zero at their pivots.
        """
        vec = np.asarray(vec, dtype=np.int64)
        if vec.shape[-1] != self.dim:
            raise DimensionMismatch(f"expected length {self.dim}, got {vec.shape[-1]}")
        if self.rank <= start:
            return vec % self.p
        block = np.atleast_2d(vec)
        coef = block[:, self.pivots[start:]]
        res = (block - matmul_mod(coef, self.rows[start:], self.p)) % self.p
        return res if vec.ndim == 2 else res[0]

    def _append_reduced(self, r: np.ndarray) -> bool:
        nz = np.flatnonzero(r)
        if nz.size == 0:
            return False
        c = int(nz[0])
        r = r * pow(int(r[c]), -1, self.p) % self.p
        k = self.rank
        if k:
            rows = self.rows
            hit = np.flatnonzero(rows[:, c])
            if hit.size:
                rows[hit] = (rows[hit] - np.outer(rows[hit, c], r)) % self.p
        if k == self._buf.shape[0]:
            grow = np.zeros((max(8, k), self.dim), dtype=np.int64)
            self._buf = np.vstack([self._buf, grow])
        self._buf[k] = r
        self.pivots.append(c)
        return True

    def insert_dense(self, vec: np.ndarray) -> bool:
        """Insert a dense row. True iff the rank increased."""
        return self._append_reduced(self.reduce(vec))

    def insert_row(self, row) -> bool:
        return self.insert_dense(SparseRow.of(row).to_dense(self.dim, self.p))

    def contains(self, vec: np.ndarray) -> bool:
        return not np.any(self.reduce(vec))


INCREASED = True
DEPENDENT = False


def _dense_block(rows: Sequence, start: int, stop: int, dim: int, p: int) -> np.ndarray:
    if isinstance(rows, np.ndarray) and rows.ndim == 2:
        chunk = rows[start:stop]
        if chunk.size and (chunk.min() < 0 or chunk.max() >= dim):
            raise DimensionMismatch(f"column index out of range for dimension {dim}")
        b = chunk.shape[0]
        flat = (np.arange(b, dtype=np.int64)[:, None] * dim + chunk).ravel()
        block = np.bincount(flat, minlength=b * dim).reshape(b, dim).astype(np.int64) % p
        return block
    if stop <= start:
        return np.zeros((0, dim), dtype=np.int64)
    return np.stack([SparseRow.of(r).to_dense(dim, p) for r in rows[start:stop]])


def rank_incremental(
    rows: Sequence,
    dim: int,
    p: int,
    early_exit_at: Optional[int] = None,
    *,
    block_size: int = 256,
) -> RankResult:
    """Exact rank of ``rows`` over F_p, stopping once ``early_exit_at`` is reached.

    ``rows`` is a 2-D integer array of indicator column indices, or any
    sequence of :class:`SparseRow` / index arrays. When the early exit fires,
    ``rows_consumed`` is the 1-based index of the row that hit the threshold.
    """
    basis = RowBasis(dim, p)
    n = len(rows)
    if early_exit_at is not None and early_exit_at <= 0:
        return RankResult(0, True, 0)
    for start in range(0, n, block_size):
        stop = min(n, start + block_size)
        residual = basis.reduce(_dense_block(rows, start, stop, dim, p))
        k0 = basis.rank
        for off in np.flatnonzero(residual.any(axis=1)):
            if not basis._append_reduced(basis.reduce(residual[off], k0)):
                continue
            if early_exit_at is not None and basis.rank >= early_exit_at:
                return RankResult(basis.rank, True, start + int(off) + 1)
        if basis.rank == dim:
            return RankResult(dim, False, n)
    return RankResult(basis.rank, False, n)


def dense_rank_oracle(matrix, p: int) -> int:
    """Textbook Gaussian elimination on a list-of-lists copy. Test oracle only."""
    a = [[int(x) % p for x in row] for row in matrix]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], p - 2, p)
        a[rank] = [x * inv % p for x in a[rank]]
        for i in range(nrows):
            if i != rank and a[i][c] != 0:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def row_dot(row, v: np.ndarray, p: int) -> int:
    sr = SparseRow.of(row)
    v = np.asarray(v, dtype=np.int64)
    cols = np.asarray(sr.cols, dtype=np.int64)
    if cols.size and cols.max() >= v.shape[0]:
        raise DimensionMismatch("row index exceeds vector dimension")
    if sr.vals is None:
        return int(v[cols].sum() % p)
    return int((np.asarray(sr.vals, dtype=np.int64) % p * v[cols] % p).sum() % p)


def rank_of_vectors(vectors: Iterable[np.ndarray], p: int) -> int:
    vectors = list(vectors)
    if not vectors:
        return 0
    basis = RowBasis(len(vectors[0]), p)
    for v in vectors:
        basis.insert_dense(v)
    return basis.rank
