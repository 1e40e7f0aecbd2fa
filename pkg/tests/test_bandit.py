import dataclasses
import json
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from whittle_kf.bandit import (BanditInstance, MyopicPolicy, NeverObservePolicy, RandomPolicy, RoundRobinPolicy,
                               SequencePolicy, WhittlePolicy, brute_force_optimal, kalman_trace, make_policy,
                               random_instance, simulate_policy, variance_step, whittle_policy_action)
from whittle_kf.errors import ContractViolation, InvalidArgument, ResourceLimitError
from whittle_kf.moebius import ArmParams, y1


def inst(n=2, T=5, m=1, beta=0.6, a0=0.2):
    arms = tuple(ArmParams(a0, 1.0 + i, 1.0, 0.2 * i, beta) for i in range(n))
    return BanditInstance(arms, (), T, m)


def test_instance_validation():
    with pytest.raises(InvalidArgument):
        BanditInstance((ArmParams(0, 1, beta=0.5), ArmParams(0, 1, beta=0.6)))
    with pytest.raises(InvalidArgument):
        inst(m=3)
    assert inst().initial_variances == (1.0, 1.0)


def test_instance_json_roundtrip(tmp_path):
    i = inst(3, 4, 2)
    path = tmp_path / "i.json"
    path.write_text(json.dumps(i.to_dict()))
    assert BanditInstance.load(path) == i


def test_variance_step():
    p = ArmParams(0.0, 1.0)
    assert variance_step(0.0, True, p) == 0.5
    assert variance_step(2.0, False, p) == 3.0
    q = ArmParams(0.2, 1.0)
    assert variance_step(y1(q), True, q) == pytest.approx(y1(q), abs=1e-15)


def test_single_arm_forced():
    p = ArmParams(0.2, 1.0, 1.5, 0.3, 0.7)
    i = BanditInstance((p,), (2.0,), 6)
    res = simulate_policy(i, MyopicPolicy())
    x, total = 2.0, 0.0
    for t in range(6):
        x = (x + 1) / (x + 2)
        total += 0.7**t * (0.3 + 1.5 * x)
    assert res.discounted_cost == pytest.approx(total, rel=1e-14)
    assert res.action_log == [(0,)] * 6
    opt = brute_force_optimal(i)
    assert opt.discounted_cost == res.discounted_cost


def test_round_robin_and_random():
    i = inst(3, 6)
    assert [a[0] for a in simulate_policy(i, RoundRobinPolicy()).action_log] == [0, 1, 2, 0, 1, 2]
    r1 = simulate_policy(i, RandomPolicy(7)).action_log
    r2 = simulate_policy(i, RandomPolicy(7)).action_log
    assert r1 == r2


def test_never_observe_allows_empty_but_others_do_not():
    i = inst()
    res = simulate_policy(i, NeverObservePolicy())
    assert res.action_log == [()] * i.horizon
    with pytest.raises(ContractViolation):
        simulate_policy(i, SequencePolicy([()] * i.horizon))
    with pytest.raises(ContractViolation):
        simulate_policy(i, SequencePolicy([(0, 1)] * i.horizon))


def test_whittle_identical_arms_pick_largest_variance():
    p = ArmParams(0.2, 1.0, beta=0.6)
    i = BanditInstance((p, p, p), (0.5, 2.0, 1.0), 3, 2)
    assert whittle_policy_action([0.5, 2.0, 1.0], i) == (1, 2)
    assert whittle_policy_action([1.0, 1.0, 1.0], i) == (0, 1)


def test_whittle_selects_even_when_indexes_negative():
    p = ArmParams(0.2, 1.0, 1.0, 50.0, 0.6)
    i = BanditInstance((p, p), (), 3)
    res = simulate_policy(i, WhittlePolicy())
    assert all(len(a) == 1 for a in res.action_log)


@given(st.integers(0, 10**6))
def test_cost_recomputable(seed):
    rng = random.Random(seed)
    i = random_instance(rng, 3, 6, 2)
    for pol in (WhittlePolicy(), MyopicPolicy(), RandomPolicy(seed)):
        res = simulate_policy(i, pol)
        assert abs(res.recompute_cost(i) - res.discounted_cost) <= 1e-10 * max(1, res.discounted_cost)


def test_variance_log_depends_only_on_actions():
    i = inst(3, 6)
    a = simulate_policy(i, MyopicPolicy())
    b = simulate_policy(i, SequencePolicy(a.action_log))
    assert a.variance_log == b.variance_log


def test_brute_force_cap_and_optimality():
    i = inst(2, 6)
    opt = brute_force_optimal(i)
    for pol in (WhittlePolicy(), MyopicPolicy(), RoundRobinPolicy(), RandomPolicy(3)):
        assert opt.discounted_cost <= simulate_policy(i, pol).discounted_cost + 1e-12
    with pytest.raises(ResourceLimitError):
        brute_force_optimal(inst(2, 30))


def test_tail_bound_covers_long_horizon():
    i = inst(2, 5, a0=0.0)
    long = dataclasses.replace(i, horizon=200)
    for pol in (WhittlePolicy(), RoundRobinPolicy()):
        short, full = simulate_policy(i, pol), simulate_policy(long, pol)
        assert 0 <= full.discounted_cost - short.discounted_cost <= i.tail_bound()


def test_kalman_trace_variances_exact_and_reproducible():
    i = BanditInstance((ArmParams(0.0, 1.0, beta=0.6), ArmParams(0.3, 2.0, beta=0.6)), (), 8)
    t1 = kalman_trace(i, RoundRobinPolicy(), 11)
    t2 = kalman_trace(i, RoundRobinPolicy(), 11)
    sim = simulate_policy(i, RoundRobinPolicy())
    assert [tuple(r) for r in t1.variances.tolist()] == sim.variance_log
    assert np.array_equal(t1.states, t2.states) and np.array_equal(t1.means, t2.means, equal_nan=True)
    # arm 0 has a = 0: passive steps emit nothing and leave the mean alone
    for t, acts in enumerate(t1.actions):
        if 0 not in acts:
            assert np.isnan(t1.observations[t, 0])
            prev = t1.means[t - 1, 0] if t else 0.0
            assert t1.means[t, 0] == prev


def test_kalman_trace_monte_carlo_mse():
    i = BanditInstance((ArmParams(0.0, 1.0, beta=0.6), ArmParams(0.5, 3.0, beta=0.6)), (1.0, 2.0), 6)
    n = 10_000
    err2 = np.zeros((n, 6, 2))
    for s in range(n):
        tr = kalman_trace(i, RoundRobinPolicy(), s)
        err2[s] = (tr.means - tr.states) ** 2
    logged = np.array(simulate_policy(i, RoundRobinPolicy()).variance_log)
    mse = err2.mean(axis=0)
    se = err2.std(axis=0, ddof=1) / np.sqrt(n)
    assert np.all(np.abs(mse - logged) <= 3 * se)


def test_sim_result_csv_and_json():
    res = simulate_policy(inst(2, 3), RoundRobinPolicy())
    lines = res.to_csv().splitlines()
    assert lines[0] == "t,arms,x0,x1,stage_cost" and len(lines) == 4
    assert json.loads(json.dumps(res.to_json()))["policy"] == "round_robin"


def test_make_policy():
    assert make_policy("random", 4).name == "random(4)"
    with pytest.raises(InvalidArgument):
        make_policy("oracle")
