"""Multi-arm Kalman-filter scheduling: simulation, policies and a brute-force oracle.

Timing convention: ``x_{i,-1}`` is the initial error variance.  At each
``t = 0 .. T-1`` the policy sees ``x_{., t-1}`` and picks ``m_active`` arms;
then ``x_{i,t} = phi_{active}(x_{i,t-1})`` and the stage cost
``sum_i h_i [i active] + w_i x_{i,t}`` is discounted by ``beta^t``.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import ContractViolation, InvalidArgument, ResourceLimitError
from .index import whittle_index
from .io import fmt
from .moebius import ArmParams, phi_apply, y0, y1

BRUTE_FORCE_CAP = 2_000_000


@dataclass(frozen=True)
class BanditInstance:
    arms: tuple
    initial_variances: tuple = ()
    horizon: int = 8
    m_active: int = 1

    def __post_init__(self):
        arms = tuple(self.arms)
        object.__setattr__(self, "arms", arms)
        if not arms:
            raise InvalidArgument("need at least one arm")
        if len({float(p.beta) for p in arms}) != 1:
            raise InvalidArgument("all arms must share one discount factor")
        x0 = tuple(float(v) for v in self.initial_variances) or (1.0,) * len(arms)
        if len(x0) != len(arms) or min(x0) < 0:
            raise InvalidArgument("need one non-negative initial variance per arm")
        object.__setattr__(self, "initial_variances", x0)
        if self.horizon < 1:
            raise InvalidArgument("horizon must be >= 1")
        if not 1 <= self.m_active <= len(arms):
            raise InvalidArgument("need 1 <= m_active <= N")

    @property
    def n_arms(self) -> int:
        return len(self.arms)

    @property
    def beta(self) -> float:
        return float(self.arms[0].beta)

    def tail_bound(self) -> float:
        """Policy-independent bound on ``|sum_{t>=T} beta^t (stage cost)|``.

        Variances stay below ``max(x_init, y_0)`` when ``a > 0`` and grow by
        at most one per step when ``a = 0``.
        """
        beta, T = self.beta, self.horizon
        head = beta**T / (1 - beta)
        total = 0.0
        for p, x in zip(self.arms, self.initial_variances):
            w, h = float(p.weight), abs(float(p.cost))
            cap = y0(p)
            if math.isfinite(cap):
                total += head * (h + w * max(x, cap))
            else:
                # sum_{t>=T} beta^t (x + t + 1)
                total += head * (h + w * (x + T + 1)) + w * beta**(T + 1) / (1 - beta) ** 2
        return total

    def to_dict(self) -> dict:
        return {"beta": self.beta,
                "arms": [{"a": float(p.a), "b": float(p.b), "w": float(p.weight), "h": float(p.cost)}
                         for p in self.arms],
                "x0": list(self.initial_variances), "horizon": self.horizon,
                "m_active": self.m_active}

    @classmethod
    def from_dict(cls, d: dict) -> "BanditInstance":
        try:
            beta = d["beta"]
            arms = tuple(ArmParams(a["a"], a["b"], a.get("w", 1.0), a.get("h", 0.0), beta)
                         for a in d["arms"])
        except (KeyError, TypeError) as exc:
            raise InvalidArgument(f"malformed instance: {exc}") from exc
        return cls(arms, tuple(d.get("x0", ())), int(d.get("horizon", 8)), int(d.get("m_active", 1)))

    @classmethod
    def load(cls, path) -> "BanditInstance":
        return cls.from_dict(json.loads(Path(path).read_text()))


# --- policies ---------------------------------------------------------------

class Policy:
    name = "policy"
    allows_fewer = False

    def reset(self) -> None:
        pass

    def select(self, variances: Sequence[float], t: int, instance: BanditInstance) -> tuple:
        raise NotImplementedError


def _top(scores: Sequence[float], m: int) -> tuple:
    # largest scores first, ties to the lowest arm id
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    return tuple(sorted(order[:m]))


class WhittlePolicy(Policy):
    name = "whittle"

    def __init__(self, tol: float = 1e-9, method: str = "closed"):
        self.tol = tol
        self.method = method
        self.last_indexes: list = []

    def indexes(self, variances, instance: BanditInstance) -> list:
        return [whittle_index(x, p, self.tol, self.method).lam
                for x, p in zip(variances, instance.arms)]

    def select(self, variances, t, instance):
        self.last_indexes = self.indexes(variances, instance)
        return _top(self.last_indexes, instance.m_active)


def whittle_policy_action(variances: Sequence[float], instance: BanditInstance,
                          tol: float = 1e-9) -> tuple:
    if min(variances) < 0:
        raise InvalidArgument("variances must be non-negative")
    return WhittlePolicy(tol).select(variances, 0, instance)


class MyopicPolicy(Policy):
    """Largest one-step weighted variance reduction net of observation cost."""

    name = "myopic"

    def select(self, variances, t, instance):
        scores = [float(p.weight) * (phi_apply(0, x, p) - phi_apply(1, x, p)) - float(p.cost)
                  for x, p in zip(variances, instance.arms)]
        return _top(scores, instance.m_active)


class RoundRobinPolicy(Policy):
    name = "round_robin"

    def select(self, variances, t, instance):
        n, m = instance.n_arms, instance.m_active
        return tuple(sorted((t * m + j) % n for j in range(m)))


class RandomPolicy(Policy):
    def __init__(self, seed: int = 0):
        self.seed = seed
        self.name = f"random({seed})"
        self.reset()

    def reset(self):
        self._rng = random.Random(self.seed)

    def select(self, variances, t, instance):
        return tuple(sorted(self._rng.sample(range(instance.n_arms), instance.m_active)))


class NeverObservePolicy(Policy):
    name = "never_observe"
    allows_fewer = True

    def select(self, variances, t, instance):
        return ()


class SequencePolicy(Policy):
    """Replays a fixed action log."""

    def __init__(self, actions: Sequence[tuple], name: str = "sequence"):
        self.actions = [tuple(a) for a in actions]
        self.name = name

    def select(self, variances, t, instance):
        return self.actions[t]


def baseline_policies(seed: int = 0) -> dict:
    return {"myopic": MyopicPolicy(), "round_robin": RoundRobinPolicy(),
            "random": RandomPolicy(seed), "never_observe": NeverObservePolicy()}


POLICIES = {"whittle": WhittlePolicy, "myopic": MyopicPolicy, "round_robin": RoundRobinPolicy,
            "random": RandomPolicy, "never_observe": NeverObservePolicy}


def make_policy(name: str, seed: int = 0) -> Policy:
    if name not in POLICIES:
        raise InvalidArgument(f"unknown policy {name!r}; choose from {sorted(POLICIES)}")
    return RandomPolicy(seed) if name == "random" else POLICIES[name]()


# --- simulation -------------------------------------------------------------

@dataclass
class SimResult:
    policy_name: str
    discounted_cost: float
    action_log: list
    variance_log: list
    stage_costs: list
    tail_bound: float

    def recompute_cost(self, instance: BanditInstance) -> float:
        beta = instance.beta
        total = 0.0
        for t, (acts, xs) in enumerate(zip(self.action_log, self.variance_log)):
            stage = sum(float(p.cost) for i, p in enumerate(instance.arms) if i in acts)
            stage += sum(float(p.weight) * x for p, x in zip(instance.arms, xs))
            total += beta**t * stage
        return total

    def to_json(self) -> dict:
        return {"policy": self.policy_name, "discounted_cost": self.discounted_cost,
                "tail_bound": self.tail_bound, "actions": [list(a) for a in self.action_log],
                "variances": [list(x) for x in self.variance_log], "stage_costs": self.stage_costs}

    def to_csv(self) -> str:
        n = len(self.variance_log[0]) if self.variance_log else 0
        lines = [",".join(["t", "arms"] + [f"x{i}" for i in range(n)] + ["stage_cost"])]
        for t, (acts, xs, c) in enumerate(zip(self.action_log, self.variance_log, self.stage_costs)):
            lines.append(",".join([str(t), ";".join(map(str, acts))] + [fmt(x) for x in xs] + [fmt(c)]))
        return "\n".join(lines) + "\n"


def variance_step(x: float, active: bool, params: ArmParams) -> float:
    return phi_apply(1 if active else 0, x, params)


def _step(variances, acts, instance: BanditInstance):
    new = [variance_step(x, i in acts, p)
           for i, (x, p) in enumerate(zip(variances, instance.arms))]
    stage = sum(float(instance.arms[i].cost) for i in acts)
    stage += sum(float(p.weight) * x for p, x in zip(instance.arms, new))
    return new, stage


def _validate(acts, instance: BanditInstance, policy: Policy) -> tuple:
    acts = tuple(sorted(int(i) for i in acts))
    if len(set(acts)) != len(acts) or any(not 0 <= i < instance.n_arms for i in acts):
        raise ContractViolation(f"{policy.name} returned invalid arms {acts}")
    if len(acts) != instance.m_active and not (policy.allows_fewer and len(acts) < instance.m_active):
        raise ContractViolation(f"{policy.name} returned {len(acts)} arms, expected {instance.m_active}")
    return acts


def simulate_policy(instance: BanditInstance, policy: Policy) -> SimResult:
    policy.reset()
    beta = instance.beta
    xs = list(instance.initial_variances)
    actions, variances, stages = [], [], []
    total = 0.0
    for t in range(instance.horizon):
        acts = _validate(policy.select(tuple(xs), t, instance), instance, policy)
        xs, stage = _step(xs, acts, instance)
        actions.append(acts)
        variances.append(tuple(xs))
        stages.append(stage)
        total += beta**t * stage
    return SimResult(policy.name, total, actions, variances, stages, instance.tail_bound())


def brute_force_optimal(instance: BanditInstance, cap: int = BRUTE_FORCE_CAP) -> SimResult:
    """Exhaustive minimum of the truncated objective over all action sequences.

    Ties go to the lexicographically first sequence.
    """
    choices = list(combinations(range(instance.n_arms), instance.m_active))
    if len(choices) ** instance.horizon > cap:
        raise ResourceLimitError(
            f"{len(choices)}^{instance.horizon} sequences exceed the cap of {cap}")
    beta, T = instance.beta, instance.horizon
    best = [math.inf, None]
    path: list = []

    def dfs(t, xs, acc):
        if t == T:
            if acc < best[0]:
                best[0], best[1] = acc, list(path)
            return
        disc = beta**t
        for acts in choices:
            nxt, stage = _step(xs, acts, instance)
            path.append(acts)
            dfs(t + 1, nxt, acc + disc * stage)
            path.pop()

    dfs(0, list(instance.initial_variances), 0.0)
    res = simulate_policy(instance, SequencePolicy(best[1], "brute_force"))
    return res


# --- stochastic trace -------------------------------------------------------

@dataclass
class KalmanTrace:
    states: np.ndarray        # (T, N) true Z_{i,t}
    observations: np.ndarray  # (T, N); nan where no observation was made
    means: np.ndarray         # (T, N) posterior means
    variances: np.ndarray     # (T, N) posterior variances
    actions: list
    rng_seed: int

    def to_json(self) -> dict:
        def rows(a):
            return [[None if math.isnan(v) else float(v) for v in r] for r in a]
        return {"seed": self.rng_seed, "actions": [list(a) for a in self.actions],
                "states": rows(self.states), "observations": rows(self.observations),
                "means": rows(self.means), "variances": rows(self.variances)}


def kalman_trace(instance: BanditInstance, policy: Policy, seed: int) -> KalmanTrace:
    """Sample the random walks and observations, and run the scalar Kalman filter.

    The variance update is the same deterministic map used by
    :func:`simulate_policy`, so the variance log matches it exactly.
    """
    rng = np.random.default_rng(seed)
    policy.reset()
    n, T = instance.n_arms, instance.horizon
    x = list(instance.initial_variances)
    zhat = np.zeros(n)
    z = rng.normal(0.0, np.sqrt(x))
    S, Y, Mn, V = (np.empty((T, n)) for _ in range(4))
    actions = []
    for t in range(T):
        acts = _validate(policy.select(tuple(x), t, instance), instance, policy)
        z = z + rng.normal(0.0, 1.0, n)
        noise = rng.normal(0.0, 1.0, n)
        for i, p in enumerate(instance.arms):
            r = float(p.b) if i in acts else float(p.a)
            prior = x[i] + 1
            x[i] = phi_apply(1 if i in acts else 0, x[i], p)
            if r > 0:
                y = z[i] + noise[i] / math.sqrt(r)
                gain = prior * r / (1 + prior * r)
                zhat[i] = zhat[i] + gain * (y - zhat[i])
                Y[t, i] = y
            else:
                Y[t, i] = math.nan
        S[t], Mn[t], V[t] = z, zhat, x
        actions.append(acts)
    return KalmanTrace(S, Y, Mn, V, actions, seed)


def random_instance(rng: random.Random, n_arms: int = 2, horizon: int = 8, m_active: int = 1,
                    beta: Optional[float] = None) -> BanditInstance:
    """Instance with ``a ~ U[0,1)``, ``b - a ~ U[0.5, 4]``, ``w ~ U[0.5, 2]``, ``h ~ U[0, 1]``."""
    beta = beta if beta is not None else rng.uniform(0.3, 0.9)
    arms = []
    for _ in range(n_arms):
        a = rng.uniform(0, 1)
        arms.append(ArmParams(a, a + rng.uniform(0.5, 4), rng.uniform(0.5, 2), rng.uniform(0, 1), beta))
    x0 = tuple(rng.uniform(0, 3) for _ in range(n_arms))
    return BanditInstance(tuple(arms), x0, horizon, m_active)
