"""Greedy maximisation of the last file's demand for a K-file MDS core.

Step 1 puts each of the first K-1 files on its own systematic nodes.  Step 2
pours leftover capacity into mixed repair groups (one systematic node of
every file that still has spare systematic capacity, topped up with coded
nodes), draining the file with the least spare systematic capacity first.
Leftover demand rides along before anything is credited to f_K.  When no
systematic capacity remains, all-coded groups take over, and finally f_K's
own systematic nodes are added.

Demand is always spread evenly over all groups of one shape, so a
:class:`GreedyTrace` replays to a concrete splitting strategy.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ._num import div, fmt, is_exact
from .errors import UnsupportedParametersError
from .routing import SplittingStrategy, strategy_from_shape_rates
from .storage import GroupShape, RepairGroupTable, StorageSystem

FLOAT_TOL = 1e-12


@dataclass
class GreedyState:
    residual_lambda: list  # K-1 entries
    N_avail: list  # K entries
    mu_sys: list  # K entries
    mu_C: object
    C_avail: int
    K_prime: int
    lambda_K_acc: object = 0


@dataclass(frozen=True)
class TraceStep:
    phase: str
    file: int  # file whose requests were sent
    shape: GroupShape
    rate: object  # total rate over all groups of the shape

    def to_json(self, system: StorageSystem | None = None) -> str:
        doc = {"phase": self.phase, "file": self.file + 1,
               "shape": self.shape.to_json(), "rate": float(fmt(self.rate))}
        if system is not None:
            doc["groups"] = self.shape.count(system)
            doc["per_group_rate"] = float(fmt(div(self.rate, doc["groups"])))
        return json.dumps(doc)


@dataclass
class GreedyTrace:
    steps: list[TraceStep] = field(default_factory=list)

    def add(self, phase, file, shape, rate):
        if rate > 0:
            self.steps.append(TraceStep(phase, file, shape, rate))

    def to_jsonl(self, system: StorageSystem | None = None) -> str:
        return "".join(step.to_json(system) + "\n" for step in self.steps)

    def replay(self, table: RepairGroupTable) -> tuple[tuple, SplittingStrategy]:
        """Demand vector and splitting strategy implied by the trace."""
        K = table.K
        rates = [[0] * len(table.shapes[k]) for k in range(K)]
        for step in self.steps:
            s = table.shapes[step.file].index(step.shape)
            rates[step.file][s] += step.rate
        demand = tuple(sum(r) for r in rates)
        return demand, strategy_from_shape_rates(table, demand, rates)


def _zero_like(mu):
    return Fraction(0) if is_exact(mu) else 0.0


def step1_absorb(system: StorageSystem, demand: Sequence, trace: GreedyTrace | None = None) -> GreedyState:
    """Serve each of the first K-1 files from its own systematic nodes."""
    K, mu = system.K, system.mu
    if len(demand) != K - 1:
        raise UnsupportedParametersError(f"need {K - 1} demands, got {len(demand)}")
    if any(v < 0 for v in demand):
        raise UnsupportedParametersError("demands must be nonnegative")
    zero = _zero_like(mu)
    residual, N_avail, mu_sys = [], [], []
    for i in range(K - 1):
        lam, n = demand[i], system.N_counts[i]
        if lam <= mu * n:
            whole = math.floor(div(lam, mu))
            left = n - whole
            residual.append(zero)
            N_avail.append(left)
            mu_sys.append(mu - div(lam - whole * mu, left) if left > 0 else zero)
            served = lam
        else:
            residual.append(lam - mu * n)
            N_avail.append(0)
            mu_sys.append(zero)
            served = mu * n
        if trace is not None:
            trace.add("step1", i, GroupShape(i, (i,), 0), served)
    N_avail.append(system.N_counts[K - 1])
    mu_sys.append(mu)
    K_prime = sum(1 for i in range(K - 1) if N_avail[i] > 0)
    return GreedyState(residual, N_avail, mu_sys, mu, system.C, K_prime, zero)


def _spend(state: GreedyState, amount, K, shape_for, trace, phase):
    """Send ``amount`` through groups of one kind: residual demand first, then f_K."""
    for i, need in enumerate(state.residual_lambda):
        if amount <= 0:
            break
        if need > 0:
            used = min(need, amount)
            state.residual_lambda[i] = need - used
            amount -= used
            if trace is not None:
                trace.add(phase, i, shape_for(i), used)
    if amount > 0:
        state.lambda_K_acc += amount
        if trace is not None:
            trace.add(phase, K - 1, shape_for(K - 1), amount)


def step2_waterfill(system: StorageSystem, state: GreedyState,
                    trace: GreedyTrace | None = None, tol=None) -> GreedyState:
    K, mu = system.K, system.mu
    if tol is None:
        tol = 0 if is_exact(mu, *state.mu_sys, state.mu_C) else FLOAT_TOL
    zero = _zero_like(mu)
    last = K - 1

    def active():
        return [i for i in range(last) if state.N_avail[i] > 0]

    while state.C_avail > 0 and state.C_avail >= K - state.K_prime:
        if state.K_prime > 0:
            files = tuple(active())
            m = min(files, key=lambda i: (state.N_avail[i] * state.mu_sys[i], i))
            n_coded = K - state.K_prime
            cap_m = state.mu_sys[m] * state.N_avail[m]
            cap_C = div(state.mu_C * state.C_avail, n_coded)
            l = min(cap_m, cap_C)
            _spend(state, l, K, lambda f: GroupShape(f, files, n_coded), trace, "mixed")
            for j in files:
                state.mu_sys[j] = state.mu_sys[j] - div(l, state.N_avail[j])
            if cap_m <= cap_C:
                state.mu_C = state.mu_C - div(l * n_coded, state.C_avail)
                for j in files:
                    if j == m or state.mu_sys[j] * state.N_avail[j] <= tol:
                        state.N_avail[j] = 0
                        state.mu_sys[j] = zero
                state.K_prime = len(active())
            else:
                state.mu_C = zero
                state.C_avail = 0
        else:
            n_coded = K
            rest = sum(state.residual_lambda)
            capacity = div(state.C_avail, K) * state.mu_C
            if rest > capacity + tol:
                raise UnsupportedParametersError(
                    f"all-coded groups can carry {capacity} but {rest} demand is left")
            _spend(state, capacity, K, lambda f: GroupShape(f, (), n_coded), trace, "coded")
            state.mu_C = zero
            state.C_avail = 0

    if any(v > tol for v in state.residual_lambda):
        raise UnsupportedParametersError(
            f"greedy left demand unserved: {state.residual_lambda}")
    tail = state.mu_sys[last] * state.N_avail[last]
    state.lambda_K_acc += tail
    if trace is not None:
        trace.add("tail", last, GroupShape(last, (last,), 0), tail)
    return state


def greedy_precondition(system: StorageSystem, demand: Sequence) -> bool:
    mu = system.mu
    bound = sum(mu * system.N_counts[i] for i in range(system.K - 1)) + div(system.C, system.K) * mu
    return all(v >= 0 for v in demand) and sum(demand) <= bound


def maximize_lambda_K_greedy(system: StorageSystem, demand: Sequence):
    """Return ``(lambda_K, trace)`` for the given demands of the first K-1 files."""
    demand = list(demand)
    if len(demand) != system.K - 1:
        raise UnsupportedParametersError(f"need {system.K - 1} demands, got {len(demand)}")
    if not greedy_precondition(system, demand):
        raise UnsupportedParametersError(
            "greedy needs sum of demands <= sum(mu N_i) + (C/K) mu over the first K-1 files")
    trace = GreedyTrace()
    state = step1_absorb(system, demand, trace)
    state = step2_waterfill(system, state, trace)
    return state.lambda_K_acc, trace
