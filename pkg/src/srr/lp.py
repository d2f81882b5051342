"""Linear-programming ground truth for region membership and L(lambda_hat).

Both formulations work in rate space: ``r`` is the request rate a file sends
to a repair group (or to a whole class of interchangeable groups), so that
``alpha = r / lambda`` and every constraint is linear.

``formulation="nodes"`` has one variable per repair group and one capacity
row per node.  ``formulation="classes"`` has one variable per group shape
and one capacity row per node class (the systematic nodes of one file, or
the coded nodes).  The two have the same optimum: averaging any feasible
per-group solution over relabelings of same-class nodes yields a symmetric
solution, and a symmetric solution satisfies the per-node rows iff the
class totals fit.  The class form is tiny, so it is the default.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ._num import coerce
from .errors import DimensionError
from .routing import DemandVector, SplittingStrategy, node_loads, strategy_from_shape_rates
from .simplex import DEFAULT_TOL, linprog_max
from .storage import RepairGroupTable, StorageSystem, enumerate_repair_groups


@dataclass(frozen=True)
class LpMode:
    exact: bool = True
    tol: float = DEFAULT_TOL
    backend: str | None = None  # float kernel; None picks the import-time default

    def __post_init__(self):
        if not self.exact and not self.tol > 0:
            raise ValueError("float mode needs a positive tolerance")

    @classmethod
    def parse(cls, name: str, tol: float = DEFAULT_TOL) -> "LpMode":
        if name == "rational":
            return cls(True)
        if name == "float":
            return cls(False, tol)
        raise ValueError(f"unknown LP mode {name!r}")

    @property
    def name(self) -> str:
        return "rational" if self.exact else "float"


RATIONAL = LpMode(True)
FLOAT = LpMode(False)


@dataclass
class FeasibilityWitness:
    feasible: bool
    strategy: SplittingStrategy | None = None
    demand: tuple = ()
    binding_nodes: frozenset = field(default_factory=frozenset)


def total_capacity_bound(system: StorageSystem):
    """N * mu: no single file can get more than this."""
    return system.N * system.mu


def _build(system, table, demand, free_last, exact, formulation):
    """Variables, equality rows and capacity rows for either formulation.

    Returns ``(columns, c, A_ub, b_ub, A_eq, b_eq)`` or None when some file
    with positive fixed demand has no repair group at all.
    """
    K = system.K
    mu = coerce(system.mu, exact)
    fixed = range(K - 1) if free_last else range(K)
    for k in fixed:
        if demand[k] > 0 and table.gamma[k] == 0:
            return None

    columns = []  # (file, local index)
    if formulation == "nodes":
        for k in range(K):
            if k in fixed and demand[k] == 0:
                continue
            columns += [(k, i) for i in range(table.gamma[k])]
        A_ub = [[0] * len(columns) for _ in range(system.N)]
        for col, (k, i) in enumerate(columns):
            for j in table.groups[k][i].members:
                A_ub[j][col] = 1
        b_ub = [mu] * system.N
    elif formulation == "classes":
        for k in range(K):
            if k in fixed and demand[k] == 0:
                continue
            columns += [(k, s) for s in range(len(table.shapes[k]))]
        classes = [f for f in range(K) if system.N_counts[f] > 0]
        row_of = {f: r for r, f in enumerate(classes)}
        coded_row = len(classes) if system.C > 0 else None
        nrows = len(classes) + (coded_row is not None)
        A_ub = [[0] * len(columns) for _ in range(nrows)]
        for col, (k, s) in enumerate(columns):
            shape = table.shapes[k][s]
            for f in shape.systematic:
                A_ub[row_of[f]][col] += 1
            if shape.coded:
                A_ub[coded_row][col] += shape.coded
        b_ub = [system.N_counts[f] * mu for f in classes]
        if coded_row is not None:
            b_ub.append(system.C * mu)
    else:
        raise ValueError(f"unknown formulation {formulation!r}")

    A_eq, b_eq = [], []
    for k in fixed:
        if demand[k] == 0:
            continue
        A_eq.append([1 if ck == k else 0 for ck, _ in columns])
        b_eq.append(coerce(demand[k], exact))
    c = [1 if (free_last and ck == K - 1) else 0 for ck, _ in columns]
    return columns, c, A_ub, b_ub, A_eq, b_eq


def _witness(system, table, demand, columns, x, exact, tol, formulation):
    K = system.K
    if formulation == "nodes":
        rates = [[0] * g for g in table.gamma]
        for (k, i), v in zip(columns, x):
            rates[k][i] = v
        alpha = []
        for k in range(K):
            lam = demand[k]
            alpha.append(tuple(r / lam for r in rates[k]) if lam > 0 else (0,) * table.gamma[k])
        strategy = SplittingStrategy(tuple(alpha))
    else:
        rates = [[0] * len(table.shapes[k]) for k in range(K)]
        for (k, s), v in zip(columns, x):
            rates[k][s] = v
        strategy = strategy_from_shape_rates(table, demand, rates)
    loads = node_loads(table, strategy, demand)
    mu = coerce(system.mu, exact)
    if exact:
        binding = frozenset(j for j, load in enumerate(loads) if load == mu)
    else:
        binding = frozenset(j for j, load in enumerate(loads) if abs(load - mu) <= tol)
    return FeasibilityWitness(True, strategy, tuple(demand), binding)


def feasible(system: StorageSystem, table: RepairGroupTable | None, demand,
             mode: LpMode = RATIONAL, formulation: str = "classes") -> FeasibilityWitness:
    """Decide whether ``demand`` lies in the service rate region."""
    table = table or enumerate_repair_groups(system)
    demand = tuple(coerce(v, mode.exact) for v in DemandVector.of(demand))
    if len(demand) != system.K:
        raise DimensionError(f"demand has {len(demand)} entries, system has {system.K} files")
    if not any(demand):
        zero = Fraction(0) if mode.exact else 0.0
        empty = SplittingStrategy(tuple((zero,) * g for g in table.gamma))
        return FeasibilityWitness(True, empty, demand, frozenset())
    built = _build(system, table, demand, False, mode.exact, formulation)
    if built is None:
        return FeasibilityWitness(False, demand=demand)
    columns, c, A_ub, b_ub, A_eq, b_eq = built
    res = linprog_max(c, A_ub, b_ub, A_eq, b_eq, exact=mode.exact, tol=mode.tol,
                     backend=mode.backend)
    if not res.ok:
        return FeasibilityWitness(False, demand=demand)
    return _witness(system, table, demand, columns, res.x, mode.exact, mode.tol, formulation)


def maximize_last(system: StorageSystem, table: RepairGroupTable | None, lambda_hat: Sequence,
                  mode: LpMode = RATIONAL, formulation: str = "classes"):
    """Return ``(L, witness)``; ``L`` is None when ``(lambda_hat, 0)`` is not in the region."""
    table = table or enumerate_repair_groups(system)
    lambda_hat = tuple(coerce(v, mode.exact) for v in lambda_hat)
    if len(lambda_hat) != system.K - 1:
        raise DimensionError(f"lambda_hat needs {system.K - 1} entries, got {len(lambda_hat)}")
    zero = Fraction(0) if mode.exact else 0.0
    probe = lambda_hat + (zero,)
    built = _build(system, table, probe, True, mode.exact, formulation)
    if built is None:
        return None, FeasibilityWitness(False, demand=probe)
    columns, c, A_ub, b_ub, A_eq, b_eq = built
    res = linprog_max(c, A_ub, b_ub, A_eq, b_eq, exact=mode.exact, tol=mode.tol,
                     backend=mode.backend)
    if not res.ok:
        return None, FeasibilityWitness(False, demand=probe)
    L = res.objective
    if not mode.exact:
        L = max(L, 0.0)
    demand = lambda_hat + (L,)
    return L, _witness(system, table, demand, columns, res.x, mode.exact, mode.tol, formulation)


def lp_L(system: StorageSystem, lambda_hat: Sequence, mode: LpMode = RATIONAL, table=None):
    """Shorthand for the boundary value alone (None outside the region)."""
    return maximize_last(system, table, lambda_hat, mode)[0]
