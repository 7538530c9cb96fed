"""Dense GF(2) linear algebra on bit-packed rows.

Rows are stored as Python integers (bit j of ``rows[i]`` is entry (i, j)),
which gives word-parallel XOR row operations without any dependency. All
matrices here are small (cut matrices of desk-scale graphs), so elimination
cost is negligible; the packing mainly keeps rank queries cheap inside the
tree-search inner loops.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np


class BitMatrix:
    """Immutable dense matrix over GF(2)."""

    __slots__ = ("n_rows", "n_cols", "rows")

    def __init__(self, n_rows: int, n_cols: int, rows: Sequence[int] | None = None):
        if n_rows < 0 or n_cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self.n_rows = n_rows
        self.n_cols = n_cols
        if rows is None:
            rows = [0] * n_rows
        if len(rows) != n_rows:
            raise ValueError(f"expected {n_rows} rows, got {len(rows)}")
        mask = (1 << n_cols) - 1
        for r in rows:
            if r & ~mask:
                raise ValueError("row has bits set beyond n_cols")
        self.rows = tuple(rows)

    # -- construction ----------------------------------------------------

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "BitMatrix":
        return cls(n_rows, n_cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def from_entries(cls, entries: Iterable[Iterable[int]]) -> "BitMatrix":
        rows = []
        width = 0
        for row in entries:
            bits = 0
            for j, v in enumerate(row):
                if int(v) & 1:
                    bits |= 1 << j
                width = max(width, j + 1)
            rows.append(bits)
        return cls(len(rows), width, rows)

    @classmethod
    def from_numpy(cls, a: np.ndarray) -> "BitMatrix":
        a = np.asarray(a)
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        rows = []
        for i in range(a.shape[0]):
            bits = 0
            for j in range(a.shape[1]):
                if int(a[i, j]) & 1:
                    bits |= 1 << j
            rows.append(bits)
        return cls(a.shape[0], a.shape[1], rows)

    # -- queries ----------------------------------------------------------

    def get(self, i: int, j: int) -> int:
        if not (0 <= i < self.n_rows and 0 <= j < self.n_cols):
            raise IndexError(f"entry ({i}, {j}) outside {self.n_rows}x{self.n_cols}")
        return (self.rows[i] >> j) & 1

    def to_numpy(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            j = 0
            while r:
                if r & 1:
                    out[i, j] = 1
                r >>= 1
                j += 1
        return out

    def transpose(self) -> "BitMatrix":
        cols = [0] * self.n_cols
        for i, r in enumerate(self.rows):
            j = 0
            while r:
                if r & 1:
                    cols[j] |= 1 << i
                r >>= 1
                j += 1
        return BitMatrix(self.n_cols, self.n_rows, cols)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "BitMatrix":
        for i in row_idx:
            if not 0 <= i < self.n_rows:
                raise IndexError(f"row {i} outside matrix")
        for j in col_idx:
            if not 0 <= j < self.n_cols:
                raise IndexError(f"col {j} outside matrix")
        rows = []
        for i in row_idx:
            src = self.rows[i]
            bits = 0
            for jj, j in enumerate(col_idx):
                if (src >> j) & 1:
                    bits |= 1 << jj
            rows.append(bits)
        return BitMatrix(len(row_idx), len(col_idx), rows)

    def rank(self) -> int:
        return rank_of_rows(self.rows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.n_rows == other.n_rows
            and self.n_cols == other.n_cols
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.n_rows, self.n_cols, self.rows))

    def __repr__(self) -> str:
        return f"BitMatrix({self.n_rows}x{self.n_cols})"


def rank_of_rows(rows: Iterable[int]) -> int:
    """GF(2) rank of a list of bit-packed rows (in-place elimination on a copy)."""
    pivots: list[int] = []  # reduced rows, each with a unique leading bit
    rank = 0
    for row in rows:
        for p in pivots:
            low = p & -p
            if row & low:
                row ^= p
        if row:
            pivots.append(row)
            rank += 1
    return rank


def rank_submatrix(rows: Sequence[int], row_idx: Iterable[int], col_mask: int) -> int:
    """Rank of rows[row_idx] restricted to the columns selected by ``col_mask``.

    Column order is irrelevant for rank, so the restriction is a plain AND.
    """
    return rank_of_rows([rows[i] & col_mask for i in row_idx])
