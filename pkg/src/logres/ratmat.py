"""Exact rank computation for dense rational matrices.

Plain fraction-free-enough Gaussian elimination over `Fraction`; matrices in
this package are small (at most a few hundred entries), so no pivoting
strategy beyond "first nonzero in column" is needed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = Sequence[Sequence[Fraction]]


def rank(matrix: Matrix) -> int:
    """Exact rank by Gauss-Jordan elimination."""
    rows = [list(map(Fraction, row)) for row in matrix]
    if not rows:
        return 0
    ncols = len(rows[0])
    for row in rows:
        if len(row) != ncols:
            raise ValueError("ragged matrix")
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                factor = rows[i][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def to_text(matrix: Matrix) -> str:
    """Dense exact text format: one row per line, entries as p/q."""
    return "\n".join(" ".join(str(Fraction(x)) for x in row) for row in matrix)
