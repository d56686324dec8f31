"""Exact rational dense linear algebra (Gaussian elimination).

Matrices are lists of rows; entries are int or Fraction.  Only used on
per-degree blocks, which stay small.
"""
from __future__ import annotations

from fractions import Fraction

from .graded import norm_scalar


def _echelon(matrix):
    """Row-reduce a copy; returns (echelon rows, pivot column list)."""
    rows = [list(map(Fraction, r)) for r in matrix]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(matrix):
    if not matrix or not matrix[0]:
        return 0
    return len(_echelon(matrix)[1])


def kernel_vector(matrix):
    """A nonzero kernel vector of the matrix (as a column-space map), or None."""
    if not matrix:
        return None
    ncols = len(matrix[0])
    rows, pivots = _echelon(matrix)
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    c = free[0]
    vec = [Fraction(0)] * ncols
    vec[c] = Fraction(1)
    for i, p in enumerate(pivots):
        vec[p] = -rows[i][c]
    return [norm_scalar(v) for v in vec]


def invert(matrix):
    """Inverse of a square matrix, or None if singular."""
    n = len(matrix)
    if n == 0:
        return []
    if any(len(r) != n for r in matrix):
        return None
    aug = [list(map(Fraction, r)) + [Fraction(int(i == j)) for j in range(n)]
           for i, r in enumerate(matrix)]
    rows, pivots = _echelon(aug)
    if pivots[:n] != list(range(n)):
        return None
    return [[norm_scalar(x) for x in row[n:]] for row in rows[:n]]
