"""Two-phase dense simplex with Bland's rule.

``exact=True`` runs on ``fractions.Fraction`` and returns exact optima.
``exact=False`` runs on floats with an absolute pivot tolerance, using the
compiled kernel when it is available.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import _pykernel
from .kernels import ITERATION_LIMIT, OPTIMAL, UNBOUNDED, float_kernel

DEFAULT_TOL = 1e-9


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: list | None = None
    objective: object = None

    @property
    def ok(self) -> bool:
        return self.status == "optimal"


def _as_number(v, exact):
    if exact:
        return v if isinstance(v, Fraction) else Fraction(v)
    return float(v)


class _Tableau:
    """Thin wrapper so exact and float tableaus share the driver code."""

    def __init__(self, rows, exact, backend):
        self.exact = exact
        if exact:
            self.kernel, self.numpy = _pykernel, False
            self.T = rows
        else:
            self.kernel, self.numpy = float_kernel(backend)
            if self.numpy:
                import numpy as np

                self.T = np.ascontiguousarray(rows, dtype=np.float64)
            else:
                self.T = rows

    def make_basis(self, basis):
        if self.numpy:
            import numpy as np

            return np.asarray(basis, dtype=np.int_)
        return list(basis)

    def get(self, i, j):
        return self.T[i][j] if not self.numpy else self.T[i, j]

    def row(self, i):
        return list(self.T[i])

    def set_row(self, i, values):
        self.T[i] = values

    def drop_row(self, i):
        if self.numpy:
            import numpy as np

            self.T = np.ascontiguousarray(np.delete(self.T, i, axis=0))
        else:
            del self.T[i]

    @property
    def nrows(self):
        return len(self.T)


def linprog_max(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    *,
    exact: bool = True,
    tol: float = DEFAULT_TOL,
    backend: str | None = None,
    max_iter: int = 100_000,
) -> LPResult:
    """Maximise ``c @ x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``."""
    nv = len(c)
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    ptol = 0 if exact else tol

    rows_spec = []  # (coeffs, rhs, kind) with kind in {"le", "ge", "eq"} after sign fix
    for a, b in zip(A_ub, b_ub):
        a = [_as_number(v, exact) for v in a]
        b = _as_number(b, exact)
        if b < 0:
            rows_spec.append(([-v for v in a], -b, "ge"))
        else:
            rows_spec.append((a, b, "le"))
    for a, b in zip(A_eq, b_eq):
        a = [_as_number(v, exact) for v in a]
        b = _as_number(b, exact)
        if b < 0:
            a, b = [-v for v in a], -b
        rows_spec.append((a, b, "eq"))

    m = len(rows_spec)
    n_slack = sum(1 for _, _, kind in rows_spec if kind != "eq")
    n_art = sum(1 for _, _, kind in rows_spec if kind != "le")
    n_real = nv + n_slack
    width = n_real + n_art + 1

    rows, basis = [], []
    s_col, a_col = nv, n_real
    for coeffs, rhs, kind in rows_spec:
        row = list(coeffs) + [zero] * (width - nv)
        row[-1] = rhs
        if kind == "le":
            row[s_col] = one
            basis.append(s_col)
            s_col += 1
        else:
            if kind == "ge":
                row[s_col] = -one
                s_col += 1
            row[a_col] = one
            basis.append(a_col)
            a_col += 1
        rows.append(row)

    # phase I objective: maximise -(sum of artificials)
    obj = [zero] * width
    for row, b in zip(rows, basis):
        if b >= n_real:
            for k in range(width):
                if k < n_real or k == width - 1:
                    obj[k] = obj[k] - row[k]
    rows.append(obj)

    tab = _Tableau(rows, exact, backend)
    basis = tab.make_basis(basis)

    if n_art:
        status = tab.kernel.run_simplex(tab.T, basis, n_real, ptol, max_iter)
        if status == ITERATION_LIMIT:
            raise RuntimeError("simplex iteration limit reached in phase I")
        if tab.get(tab.nrows - 1, width - 1) < -ptol:
            return LPResult("infeasible")
        # drive zero-level artificials out of the basis, dropping redundant rows
        i = 0
        while i < tab.nrows - 1:
            if basis[i] >= n_real:
                col = next((j for j in range(n_real) if abs(tab.get(i, j)) > ptol), None)
                if col is None:
                    tab.drop_row(i)
                    basis = tab.make_basis([b for k, b in enumerate(basis) if k != i])
                    continue
                tab.kernel.pivot(tab.T, basis, i, col)
            i += 1

    # phase II objective row
    m = tab.nrows - 1
    cc = [_as_number(v, exact) for v in c] + [zero] * (width - nv)
    obj = [-v for v in cc]
    obj[-1] = zero
    for i in range(m):
        cb = cc[basis[i]]
        if cb != 0:
            r = tab.row(i)
            for k in range(width):
                obj[k] = obj[k] + cb * r[k]
    for k in range(n_real, width - 1):
        obj[k] = zero
    tab.set_row(m, obj)

    status = tab.kernel.run_simplex(tab.T, basis, n_real, ptol, max_iter)
    if status == UNBOUNDED:
        return LPResult("unbounded")
    if status == ITERATION_LIMIT:
        raise RuntimeError("simplex iteration limit reached in phase II")
    assert status == OPTIMAL

    x = [zero] * nv
    for i in range(m):
        if basis[i] < nv:
            v = tab.get(i, width - 1)
            x[basis[i]] = v if exact else float(v)
    objective = tab.get(m, width - 1)
    if not exact:
        objective = float(objective)
        x = [max(v, 0.0) for v in x]
    return LPResult("optimal", x, objective)
