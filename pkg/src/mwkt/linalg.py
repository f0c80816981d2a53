"""Small exact Gaussian elimination over an arbitrary field.

Elements only need +, -, *, / and is_zero().  Pivoting always takes the first
nonzero entry in row order, so results are reproducible.
"""

from __future__ import annotations


def _eliminate(rows, ncols):
    """Row-reduce in place; return list of (row_index, pivot_col)."""
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if not rows[i][col].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][col].is_zero():
                factor = rows[i][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append((r, col))
        r += 1
    return pivots


def kernel_vector(rows, ncols, zero, one):
    """A nonzero kernel vector of the matrix (rows x ncols), or None."""
    work = [list(row) for row in rows]
    pivots = _eliminate(work, ncols)
    pivot_cols = {col for _, col in pivots}
    free = next((c for c in range(ncols) if c not in pivot_cols), None)
    if free is None:
        return None
    sol = [zero] * ncols
    sol[free] = one
    for r, col in pivots:
        sol[col] = -work[r][free]
    return sol


def solve_linear(rows, rhs, zero, one):
    """One solution x of A x = rhs, or None if the system is inconsistent."""
    work = [list(row) + [b] for row, b in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    pivots = _eliminate(work, ncols)
    for i in range(len(work)):
        if all(work[i][c].is_zero() for c in range(ncols)) and not work[i][ncols].is_zero():
            return None
    sol = [zero] * ncols
    for r, col in pivots:
        sol[col] = work[r][ncols]
    return sol
