"""Exact linear algebra over F_p on int64 numpy arrays.

Everything reduces mod p eagerly, so intermediate products stay far below
the int64 overflow threshold for the moduli this kernel accepts.
"""

from __future__ import annotations

import numpy as np

from .errors import UsageError


def mat_mod(m, p: int):
    return np.asarray(m, dtype=np.int64) % p


def mat_mul(a, b, p: int):
    return (np.matmul(a, b)) % p


def mat_pow(m, n: int, p: int):
    """Square-and-multiply power of a square matrix mod p; n >= 0."""
    m = mat_mod(m, p)
    if m.shape[0] != m.shape[1]:
        raise UsageError(f"matrix power needs a square matrix, got {m.shape}")
    if n < 0:
        raise UsageError("negative matrix power")
    out = np.eye(m.shape[0], dtype=np.int64)
    base = m
    while n:
        if n & 1:
            out = mat_mul(out, base, p)
        base = mat_mul(base, base, p)
        n >>= 1
    return out


class RowReducer:
    """Incremental Gaussian elimination over F_p with pivot tracking.

    Rows are kept normalized (leading coefficient 1) and are eliminated
    against all earlier pivots on insertion.  rref() back-substitutes so
    every pivot column is zero outside its own row.
    """

    def __init__(self, p: int, width: int):
        self.p = p
        self.width = width
        self.rows: list[np.ndarray] = []
        self.pivot_of_col: dict[int, int] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec) -> np.ndarray:
        """Return vec eliminated against the current pivot rows (a copy)."""
        v = mat_mod(vec, self.p).copy()
        if v.shape != (self.width,):
            raise UsageError(f"row of width {v.shape} in reducer of width {self.width}")
        for col, ri in self.pivot_of_col.items():
            c = v[col]
            if c:
                v = (v - c * self.rows[ri]) % self.p
        return v

    def add(self, vec) -> bool:
        """Insert a row; returns True when the rank grew."""
        v = self.reduce(vec)
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return False
        lead = int(nz[0])
        v = (v * pow(int(v[lead]), -1, self.p)) % self.p
        self.pivot_of_col[lead] = len(self.rows)
        self.rows.append(v)
        return True

    def rref(self) -> np.ndarray:
        """Fully reduced rows, sorted by pivot column."""
        order = sorted(self.pivot_of_col)
        rows = [self.rows[self.pivot_of_col[c]].copy() for c in order]
        for i in range(len(rows) - 1, -1, -1):
            lead = order[i]
            for j in range(i):
                c = rows[j][lead]
                if c:
                    rows[j] = (rows[j] - c * rows[i]) % self.p
        if not rows:
            return np.zeros((0, self.width), dtype=np.int64)
        return np.stack(rows)

    def pivot_columns(self) -> list[int]:
        return sorted(self.pivot_of_col)


def rank_mod(matrix, p: int) -> int:
    matrix = np.atleast_2d(mat_mod(matrix, p))
    red = RowReducer(p, matrix.shape[1])
    for row in matrix:
        red.add(row)
    return red.rank
