"""Stochastic L-armed bandits: UCB and the GROS-based robust index RUCB."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import select_on_line

RewardSampler = Callable[[int, np.random.Generator], float]


@dataclass
class BanditEnv:
    """Arms with known means; ``reward_sampler(arm, rng)`` draws one reward."""

    arm_means: np.ndarray
    reward_sampler: RewardSampler

    def __post_init__(self):
        self.arm_means = np.asarray(self.arm_means, dtype=float)

    @classmethod
    def student(cls, arm_means, df: float = 3.0) -> "BanditEnv":
        means = np.asarray(arm_means, dtype=float)
        return cls(means, lambda arm, rng: means[arm] + rng.standard_t(df))

    @property
    def L(self) -> int:
        return len(self.arm_means)

    @property
    def gaps(self) -> np.ndarray:
        return self.arm_means.max() - self.arm_means


class PolicyState:
    """Pull counts, per-arm reward histories and the round counter ``t``."""

    def __init__(self, n_arms: int, capacity: int = 64):
        self.n_arms = n_arms
        self.counts = np.zeros(n_arms, dtype=np.int64)
        self.sums = np.zeros(n_arms)
        self._buf = np.empty((n_arms, capacity))
        self.t = 0

    @property
    def history(self) -> list[np.ndarray]:
        return [self._buf[j, : self.counts[j]] for j in range(self.n_arms)]

    def update(self, arm: int, reward: float) -> None:
        n = self.counts[arm]
        if n == self._buf.shape[1]:
            self._buf = np.concatenate([self._buf, np.empty_like(self._buf)], axis=1)
        self._buf[arm, n] = reward
        self.counts[arm] += 1
        self.sums[arm] += reward
        self.t += 1

    def means(self) -> np.ndarray:
        with np.errstate(invalid="ignore", divide="ignore"):
            return self.sums / self.counts


def ucb_indices(state: PolicyState) -> np.ndarray:
    """``mean + sqrt(log t / N)`` per arm, ``+inf`` for arms never pulled."""
    index = np.full(state.n_arms, np.inf)
    pulled = state.counts > 0
    if pulled.any():
        index[pulled] = state.means()[pulled] + np.sqrt(math.log(state.t) / state.counts[pulled])
    return index


def ucb_select(state: PolicyState) -> int:
    """Smallest arm maximising the UCB index; unpulled arms come first."""
    return int(np.argmax(ucb_indices(state)))


def gros_groups(t: int) -> int:
    """Number of groups ``ceil(8 log(t^2))`` used at round ``t``."""
    return max(1, math.ceil(8.0 * math.log(t * t)))


def gros_mean(rewards, K: int) -> float:
    """GROS selection among the means of ``K`` consecutive balanced blocks."""
    x = np.asarray(rewards, dtype=float)
    N = len(x)
    K = max(1, min(K, N))
    if K == 1:
        return float(x.mean())
    # block j holds N // K items, plus one for the first N % K blocks
    size = np.full(K, N // K)
    size[: N % K] += 1
    ends = np.cumsum(size)
    cs = np.concatenate([[0.0], np.cumsum(x)])
    means = (cs[ends] - cs[ends - size]) / size
    return float(select_on_line(means)[1])


def rucb_index(rewards, t: int, variance: float, K: int | None = None) -> float:
    """``mu* + 4 sqrt(V) sqrt(log(t^2) / N)`` for one arm."""
    N = len(rewards)
    K = gros_groups(t) if K is None else K
    return gros_mean(rewards, K) + 4.0 * math.sqrt(variance) * math.sqrt(math.log(t * t) / N)


def empirical_variance(rewards, floor: float = 1e-6) -> float:
    x = np.asarray(rewards, dtype=float)
    return max(float(x.var(ddof=1)) if len(x) > 1 else floor, floor)


def rucb_select(state: PolicyState, variance_estimate=None, K: int | None = None) -> int:
    """Smallest arm maximising the robust index.

    ``variance_estimate`` gives one variance (or upper bound) per arm and
    defaults to the running empirical variance. ``K`` fixes the number of
    groups; by default ``ceil(8 log t^2)``, capped by each arm's pull count.
    """
    if state.t < 2 or np.any(state.counts == 0):
        raise RuntimeError("robust index needs every arm pulled and t >= 2 (warm-up not finished)")
    if variance_estimate is None:
        variance_estimate = [empirical_variance(h) for h in state.history]
    index = [rucb_index(h, state.t, v, K) for h, v in zip(state.history, variance_estimate)]
    return int(np.argmax(index))


@dataclass
class RunResult:
    arms: np.ndarray
    rewards: np.ndarray
    cumulative_reward: np.ndarray
    pseudo_regret: np.ndarray
    warmup_end: int = field(default=0)


def warmup_target(t0: int) -> int:
    """Pulls per arm required after warm-up: ``ceil(8 log(t0^2))`` (one per group)."""
    return gros_groups(t0)


def simulate_run(env: BanditEnv, policy: str, T: int, t0: int = 40, rng: np.random.Generator | None = None,
                 variance_estimate=None, K: int | None = None) -> RunResult:
    """Play ``T`` rounds with ``policy`` in ``{"ucb", "rucb"}``.

    RUCB plays uniformly random arms for ``t0`` rounds, then round-robin pulls
    any arm still below :func:`warmup_target` before switching to the index.
    Pseudo-regret uses the true arm means.
    """
    if policy not in ("ucb", "rucb"):
        raise ValueError(f"unknown policy {policy!r}")
    if not T >= t0 >= env.L:
        raise ValueError(f"need T >= t0 >= L, got T={T}, t0={t0}, L={env.L}")
    rng = np.random.default_rng() if rng is None else rng
    state = PolicyState(env.L)
    arms = np.empty(T, dtype=np.int64)
    rewards = np.empty(T)
    target = warmup_target(t0) if K is None else K
    warmup_end = 0
    for s in range(T):
        if policy == "ucb":
            arm = ucb_select(state)
        elif s < t0:
            arm = int(rng.integers(env.L))
        elif np.any(state.counts < target):
            arm = int(np.argmin(state.counts))
        else:
            if not warmup_end:
                warmup_end = s
            arm = rucb_select(state, variance_estimate, K)
        reward = env.reward_sampler(arm, rng)
        state.update(arm, reward)
        arms[s], rewards[s] = arm, reward
    regret = np.cumsum(env.gaps[arms])
    return RunResult(arms, rewards, np.cumsum(rewards), regret, warmup_end)


def regret_upper_bound(gaps, variances, T: float) -> float:
    """``sum over Delta_i > 0 of 32 (V_i / Delta_i) log T + 5 Delta_i``."""
    gaps = np.asarray(gaps, dtype=float)
    variances = np.broadcast_to(np.asarray(variances, dtype=float), gaps.shape)
    pos = gaps > 0
    return float(np.sum(32.0 * variances[pos] / gaps[pos] * math.log(T) + 5.0 * gaps[pos]))
