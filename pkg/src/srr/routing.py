"""Demand vectors, splitting strategies and per-node loads."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._num import div
from .errors import DimensionError, InvalidParameterError
from .storage import RepairGroupTable

EPS_NORM = 1e-12
EPS_FEAS = 1e-9


@dataclass(frozen=True)
class DemandVector:
    lam: tuple

    def __post_init__(self):
        if any(v < 0 for v in self.lam):
            raise InvalidParameterError(f"demand must be nonnegative: {self.lam}")

    @classmethod
    def of(cls, values) -> "DemandVector":
        return values if isinstance(values, cls) else cls(tuple(values))

    @property
    def K(self) -> int:
        return len(self.lam)

    def hat(self, k: int | None = None) -> tuple:
        """Drop the k-th entry (the last one by default)."""
        k = len(self.lam) - 1 if k is None else k
        return self.lam[:k] + self.lam[k + 1:]

    def with_last(self, x) -> "DemandVector":
        return DemandVector(self.lam[:-1] + (x,))

    def __iter__(self):
        return iter(self.lam)

    def __len__(self):
        return len(self.lam)

    def __getitem__(self, k):
        return self.lam[k]


@dataclass(frozen=True)
class SplittingStrategy:
    """``alpha[k][i]`` is the fraction of file-k requests sent to group i."""

    alpha: tuple[tuple, ...]

    @classmethod
    def of(cls, rows) -> "SplittingStrategy":
        return rows if isinstance(rows, cls) else cls(tuple(tuple(r) for r in rows))

    def is_normalized(self, k: int, eps=EPS_NORM) -> bool:
        total = sum(self.alpha[k])
        if isinstance(total, (int, Fraction)):
            return total == 1
        return abs(total - 1) <= eps

    def to_json(self) -> str:
        return json.dumps([[_json_number(a) for a in row] for row in self.alpha])

    @classmethod
    def from_json(cls, text: str) -> "SplittingStrategy":
        rows = json.loads(text)
        return cls.of([Fraction(a) if isinstance(a, str) else a for a in row] for row in rows)


def _json_number(v):
    # non-integral Fractions go out as "p/q" strings so a replay stays exact
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else str(v)
    return v


def _check_shapes(table: RepairGroupTable, strategy: SplittingStrategy, demand: DemandVector):
    if len(demand) != table.K:
        raise DimensionError(f"demand has {len(demand)} entries, system has {table.K} files")
    if len(strategy.alpha) != table.K:
        raise DimensionError(f"strategy has {len(strategy.alpha)} rows, system has {table.K} files")
    for k, row in enumerate(strategy.alpha):
        if len(row) != table.gamma[k]:
            raise DimensionError(
                f"strategy row {k} has {len(row)} entries, file has {table.gamma[k]} groups")


def node_loads(table: RepairGroupTable, strategy, demand) -> list:
    """Request rate arriving at each node under ``strategy`` and ``demand``."""
    strategy = SplittingStrategy.of(strategy)
    demand = DemandVector.of(demand)
    _check_shapes(table, strategy, demand)
    load = [0] * table.N
    for k, groups in enumerate(table.groups):
        lam = demand[k]
        if lam == 0:
            continue
        for a, group in zip(strategy.alpha[k], groups):
            if a == 0:
                continue
            rate = a * lam
            for j in group.members:
                load[j] = load[j] + rate
    return load


def is_feasible_with_strategy(table: RepairGroupTable, strategy, demand, mu,
                              eps_feas=EPS_FEAS, eps_norm=EPS_NORM) -> bool:
    """Check that the strategy is normalised and keeps every node at or below mu.

    Exact inputs (ints and Fractions) are compared exactly; anything
    involving floats uses the tolerances.
    """
    strategy = SplittingStrategy.of(strategy)
    demand = DemandVector.of(demand)
    loads = node_loads(table, strategy, demand)
    for k in range(table.K):
        if demand[k] > 0:
            if any(a < 0 for a in strategy.alpha[k]) or not strategy.is_normalized(k, eps_norm):
                return False
    for load in loads:
        if isinstance(load, (int, Fraction)) and isinstance(mu, (int, Fraction)):
            if load > mu:
                return False
        elif load > mu + eps_feas:
            return False
    return True


def strategy_from_shape_rates(table: RepairGroupTable, demand: Sequence,
                              shape_rates: Sequence[Sequence]) -> SplittingStrategy:
    """Spread each shape's rate evenly over its groups and normalise by demand.

    ``shape_rates[k][s]`` is the request rate file k sends to all groups of
    its s-th shape together.  Files with zero demand get an all-zero row.
    """
    alpha = []
    for k in range(table.K):
        row = [0] * table.gamma[k]
        lam = demand[k]
        if lam > 0:
            for (shape, idx), rate in zip(table.shape_indices(k), shape_rates[k]):
                if rate == 0:
                    continue
                share = div(div(rate, lam), len(idx))
                for i in idx:
                    row[i] = share
        alpha.append(tuple(row))
    return SplittingStrategy(tuple(alpha))
