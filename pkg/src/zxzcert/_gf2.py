"""Dense GF(2) elimination on small uint8 matrices."""

from __future__ import annotations

import numpy as np


def row_reduce(matrix: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2) and the pivot columns."""
    work = np.array(matrix, dtype=np.uint8) & 1
    n_rows, n_cols = work.shape
    pivots: list[int] = []
    row = 0
    for col in range(n_cols):
        if row == n_rows:
            break
        hits = np.nonzero(work[row:, col])[0]
        if hits.size == 0:
            continue
        pivot = row + hits[0]
        if pivot != row:
            work[[row, pivot]] = work[[pivot, row]]
        mask = work[:, col].astype(bool)
        mask[row] = False
        work[mask] ^= work[row]
        pivots.append(col)
        row += 1
    return work, pivots


def nullspace(matrix: np.ndarray) -> np.ndarray:
    """Basis of {v : matrix @ v = 0 mod 2}, one vector per row."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.uint8))
    n_cols = matrix.shape[1]
    rref, pivots = row_reduce(matrix)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = np.zeros((len(free), n_cols), dtype=np.uint8)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for r, p in enumerate(pivots):
            basis[k, p] = rref[r, f]
    return basis


def solve(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray | None:
    """One solution of matrix @ v = rhs mod 2, or None if inconsistent."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.uint8))
    rhs = np.asarray(rhs, dtype=np.uint8).reshape(-1, 1)
    rref, pivots = row_reduce(np.hstack([matrix, rhs]))
    n_cols = matrix.shape[1]
    if n_cols in pivots:
        return None
    sol = np.zeros(n_cols, dtype=np.uint8)
    for r, p in enumerate(pivots):
        sol[p] = rref[r, n_cols]
    return sol


def rank(matrix: np.ndarray) -> int:
    return len(row_reduce(np.atleast_2d(matrix))[1])
