# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled float64 twin of ``_pykernel``: same pivot rule, same tie-breaks."""

cdef enum:
    OPTIMAL = 0
    UNBOUNDED = 1
    ITERATION_LIMIT = 2


cpdef void pivot(double[:, ::1] T, long[::1] basis, Py_ssize_t r, Py_ssize_t c):
    cdef Py_ssize_t i, k
    cdef Py_ssize_t nrows = T.shape[0], width = T.shape[1]
    cdef double p = T[r, c], f
    for k in range(width):
        T[r, k] = T[r, k] / p
    for i in range(nrows):
        if i == r:
            continue
        f = T[i, c]
        if f == 0.0:
            continue
        for k in range(width):
            if T[r, k] != 0.0:
                T[i, k] = T[i, k] - f * T[r, k]
    basis[r] = c


cpdef int run_simplex(double[:, ::1] T, long[::1] basis, Py_ssize_t ncols,
                      double tol, long max_iter):
    cdef Py_ssize_t m = T.shape[0] - 1
    cdef Py_ssize_t rhs = T.shape[1] - 1
    cdef Py_ssize_t i, j, col, row
    cdef long it
    cdef double a, ratio, best = 0.0
    for it in range(max_iter):
        col = -1
        for j in range(ncols):
            if T[m, j] < -tol:
                col = j
                break
        if col < 0:
            return OPTIMAL
        row = -1
        for i in range(m):
            a = T[i, col]
            if a > tol:
                ratio = T[i, rhs] / a
                if row < 0 or ratio < best or (ratio == best and basis[i] < basis[row]):
                    row = i
                    best = ratio
        if row < 0:
            return UNBOUNDED
        pivot(T, basis, row, col)
    return ITERATION_LIMIT
