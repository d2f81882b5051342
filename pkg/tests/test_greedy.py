import json
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from srr import greedy
from srr.errors import UnsupportedParametersError
from srr.greedy import (GreedyTrace, maximize_lambda_K_greedy, step1_absorb, step2_waterfill)
from srr.lp import lp_L
from srr.routing import is_feasible_with_strategy, node_loads
from srr.storage import build_mds_core_system, enumerate_repair_groups

b = build_mds_core_system


def test_step1_worked_example():
    st1 = step1_absorb(b([3, 1, 1], 3), [F(3, 2), 2])
    assert st1.residual_lambda == [0, 1]
    assert st1.N_avail[:2] == [2, 0]
    assert st1.mu_sys[0] == F(3, 4)
    assert st1.K_prime == 1


def test_step1_zero_demand():
    s = b([2, 1, 3], 4)
    st1 = step1_absorb(s, [0, 0])
    assert st1.residual_lambda == [0, 0]
    assert st1.N_avail == [2, 1, 3] and st1.mu_sys == [1, 1, 1]
    assert st1.mu_C == 1 and st1.C_avail == 4


def test_step1_overflow():
    st1 = step1_absorb(b([2, 0, 0], 3), [3, 1])
    assert st1.residual_lambda == [1, 1]
    assert st1.N_avail[:2] == [0, 0]


def test_step2_worked_example():
    s = b([3, 1, 1], 3)
    st2 = step2_waterfill(s, step1_absorb(s, [F(3, 2), 2]))
    assert st2.lambda_K_acc == F(3, 2)


@pytest.mark.parametrize("N3", [0, 1, 2])
def test_step2_all_coded_tail(N3):
    s = b([0, 0, N3], 3)
    assert step2_waterfill(s, step1_absorb(s, [0, 0])).lambda_K_acc == 1 + N3


@pytest.mark.parametrize("Ns,C,lam,L", [
    ([3, 1, 1], 3, [F(3, 2), 2], F(3, 2)),
    ([0, 0, 0], 3, [F(3, 10), F(3, 10)], F(2, 5)),
    ([1, 1, 1], 3, [F(1, 2), F(1, 2)], F(7, 3)),
])
def test_examples(Ns, C, lam, L):
    assert maximize_lambda_K_greedy(b(Ns, C), lam)[0] == L


def test_float_inputs():
    L, _ = maximize_lambda_K_greedy(b([0, 0, 0], 3, 1.0), [0.3, 0.3])
    assert L == pytest.approx(0.4)


def test_k4_example_against_lp():
    s = b([1, 1, 1, 0], 4)
    lam = [F(1, 2)] * 3
    assert maximize_lambda_K_greedy(s, lam)[0] <= lp_L(s, lam)


def test_precondition():
    with pytest.raises(UnsupportedParametersError):
        maximize_lambda_K_greedy(b([0, 0, 0], 3), [F(3, 5), F(3, 5)])
    with pytest.raises(UnsupportedParametersError):
        maximize_lambda_K_greedy(b([1, 1, 1], 3), [1])


def test_trace_export():
    s = b([3, 1, 1], 3)
    _, trace = maximize_lambda_K_greedy(s, [F(3, 2), 2])
    rows = [json.loads(line) for line in trace.to_jsonl(s).splitlines()]
    assert [r["phase"] for r in rows] == ["step1", "step1", "mixed", "mixed", "tail"]
    assert sum(r["rate"] for r in rows if r["file"] == 3) == 1.5
    for r in rows:
        assert r["per_group_rate"] * r["groups"] == pytest.approx(r["rate"])


def test_worked_example_replay():
    s = b([3, 1, 1], 3)
    t = enumerate_repair_groups(s)
    _, trace = maximize_lambda_K_greedy(s, [F(3, 2), 2])
    demand, strategy = trace.replay(t)
    assert demand == (F(3, 2), 2, F(3, 2))
    assert max(node_loads(t, strategy, demand)) <= 1


def random_instance(rnd, K):
    s = b([rnd.randint(0, 3) for _ in range(K)], rnd.randint(0, 6))
    cap = sum(s.N_counts[:-1]) + F(s.C, K)
    lam = [F(rnd.randint(0, 8), 4) for _ in range(K - 1)]
    total = sum(lam)
    if total > cap:
        lam = [v * cap / total for v in lam]
    return s, lam


def recording(monkeypatch):
    states = []
    real = greedy._spend

    def spy(state, *a, **kw):
        states.append((list(state.mu_sys), state.mu_C, state.C_avail, state.K_prime))
        return real(state, *a, **kw)

    monkeypatch.setattr(greedy, "_spend", spy)
    return states


@pytest.mark.parametrize("seed", range(80))
def test_random_safety_and_replay(seed, monkeypatch):
    rnd = random.Random(seed)
    s, lam = random_instance(rnd, rnd.choice([3, 4, 5]))
    states = recording(monkeypatch)
    try:
        L, trace = maximize_lambda_K_greedy(s, lam)
    except UnsupportedParametersError:
        return
    ref = lp_L(s, lam)
    assert ref is not None and L <= ref
    t = enumerate_repair_groups(s)
    demand, strategy = trace.replay(t)
    assert list(demand[:-1]) == lam and demand[-1] == L
    assert is_feasible_with_strategy(t, strategy, demand, 1)
    for before, after in zip(states, states[1:]):
        assert all(y <= x for x, y in zip(before[0], after[0]))
        assert after[1] <= before[1] and after[2] <= before[2] and after[3] <= before[3]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=3, max_size=5), st.integers(0, 6),
       st.lists(st.fractions(0, 3, max_denominator=4), min_size=4, max_size=4))
def test_step1_conservation(Ns, C, lam):
    s = b(Ns, C)
    lam = lam[:s.K - 1]
    trace = GreedyTrace()
    state = step1_absorb(s, lam, trace)
    served = [0] * (s.K - 1)
    for step in trace.steps:
        served[step.file] += step.rate
    for i in range(s.K - 1):
        assert served[i] + state.residual_lambda[i] == lam[i]
        assert state.mu_sys[i] <= 1 and state.residual_lambda[i] >= 0
        # spare systematic capacity is whatever step 1 did not use
        assert state.mu_sys[i] * state.N_avail[i] == max(Ns[i] - lam[i], 0)
    assert state.K_prime == sum(1 for i in range(s.K - 1) if state.N_avail[i] > 0)


@pytest.mark.parametrize("seed", range(40))
def test_tied_files_permute(seed):
    rnd = random.Random(seed)
    n = rnd.randint(1, 3)
    x = F(rnd.randint(0, 4 * n), 4)
    third = rnd.randint(0, 3)
    C = rnd.randint(3, 6)
    lam = [x, x, F(rnd.randint(0, 8), 4)]

    def run(Ns, lam):
        try:
            return maximize_lambda_K_greedy(b(Ns, C), lam)[0]
        except UnsupportedParametersError:
            return None

    a = run([n, n, third, 1], lam)
    assert a == run([n, third, n, 1], [lam[0], lam[2], lam[1]])
    assert a == run([third, n, n, 1], [lam[2], lam[0], lam[1]])
