"""Reference simplex kernel on list-of-lists tableaus.

Works for any ordered field type: ``fractions.Fraction`` (with ``tol=0``) or
``float``.  The compiled kernel in ``_ckernel.pyx`` mirrors this loop for
float64 tableaus and must stay pivot-for-pivot identical to it.

Tableau layout: rows ``0..m-1`` are constraints, row ``m`` holds the reduced
costs of a maximisation, the last column is the right-hand side.
"""

OPTIMAL, UNBOUNDED, ITERATION_LIMIT = 0, 1, 2


def pivot(T, basis, r, c):
    row = T[r]
    p = row[c]
    for k in range(len(row)):
        row[k] = row[k] / p
    for i in range(len(T)):
        if i == r:
            continue
        other = T[i]
        f = other[c]
        if f == 0:
            continue
        for k in range(len(row)):
            if row[k] != 0:
                other[k] = other[k] - f * row[k]
    basis[r] = c


def run_simplex(T, basis, ncols, tol, max_iter):
    """Bland's-rule primal simplex; only columns ``< ncols`` may enter."""
    m = len(T) - 1
    obj = T[m]
    rhs = len(obj) - 1
    for _ in range(max_iter):
        col = -1
        for j in range(ncols):
            if obj[j] < -tol:
                col = j
                break
        if col < 0:
            return OPTIMAL
        row = -1
        best = None
        for i in range(m):
            a = T[i][col]
            if a > tol:
                ratio = T[i][rhs] / a
                if row < 0 or ratio < best or (ratio == best and basis[i] < basis[row]):
                    row, best = i, ratio
        if row < 0:
            return UNBOUNDED
        pivot(T, basis, row, col)
    return ITERATION_LIMIT
