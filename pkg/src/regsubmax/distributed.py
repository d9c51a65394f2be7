"""Multi-round randomized partition runs of distorted greedy.

Each round deals the ground set uniformly at random across machines, every
machine runs distorted greedy on its shard plus all solutions pooled from
earlier rounds, and the final answer is the best of machine 1's last-round
output and everything pooled before it.  Machine assignment uses a
counter-style hash of (seed, round, element), so it is reproducible and
independent of any execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import RegularizedInstance, Solution

_M64 = (1 << 64) - 1


def _mix64(x: int) -> int:
    # splitmix64 finalizer
    x &= _M64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _M64
    return x ^ (x >> 31)


def machine_of(seed: int, round_index: int, element: int, m: int) -> int:
    """Uniform machine id for one element, a pure function of its key."""
    x = _mix64((seed & _M64) + 0x9E3779B97F4A7C15)
    x = _mix64(x ^ ((round_index & _M64) + 0xD1B54A32D192ED03))
    x = _mix64(x ^ ((element & _M64) + 0x8CB92BA72F3D8DD7))
    return x % m


@dataclass(frozen=True)
class RoundAssignment:
    """One round's element -> machine partition."""

    round_index: int
    machines: np.ndarray

    @classmethod
    def draw(cls, n: int, m: int, seed: int, round_index: int) -> "RoundAssignment":
        if m < 1:
            raise ValueError("machine count must be >= 1")
        arr = np.fromiter((machine_of(seed, round_index, u, m) for u in range(n)),
                          dtype=int, count=n)
        return cls(round_index, arr)

    def shard(self, i: int) -> list[int]:
        return [u for u in range(len(self.machines)) if self.machines[u] == i]


@dataclass(frozen=True)
class DistributedConfig:
    m: int
    eps: float
    seed: int = 0

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("machine count must be >= 1")
        if self.eps <= 0:
            raise ValueError("eps must be positive")

    @property
    def rounds(self) -> int:
        return max(1, math.ceil(1.0 / self.eps))


@dataclass
class RoundMetrics:
    """Observability row for one round of a distributed run."""

    round_index: int
    pool_sets: int
    pool_elements: int
    shard_sizes: list[int] = field(default_factory=list)
    oracle_calls: int = 0


def distorted_greedy(instance: RegularizedInstance,
                     candidates: Sequence[int] | None = None) -> list[int]:
    """Budget-many passes with a growing distortion on the submodular part.

    Iteration i scores candidate u as (1 - 1/k)^(k-i-1) * marginal(u, S) -
    cost(u) and adds the best-scoring u only when its score is strictly
    positive; later iterations distort less, so a skipped iteration does not
    end the run.  Ties go to the smallest element id.
    """
    oracle, cost, k = instance.oracle, instance.cost, instance.k
    cands = sorted(range(oracle.n) if candidates is None else set(candidates))
    S: list[int] = []
    chosen: set[int] = set()
    for i in range(k):
        # 0.0 ** 0 == 1.0 keeps the k == 1 case exact.
        weight = (1.0 - 1.0 / k) ** (k - i - 1)
        best_u = None
        best_score = 0.0
        for u in cands:
            if u in chosen:
                continue
            score = weight * oracle.marginal(u, S) - cost[u]
            if score > best_score:
                best_u, best_score = u, score
        if best_u is not None:
            S.append(best_u)
            chosen.add(best_u)
    return S


def run_distributed(instance: RegularizedInstance, config: DistributedConfig,
                    metrics: list[RoundMetrics] | None = None,
                    pool_out: list[tuple[int, int, tuple[int, ...]]] | None = None,
                    ) -> Solution:
    """Randomized multi-round partition run; returns the selected Solution.

    The winner is chosen among machine 1's final-round output and all
    solutions from earlier rounds (final-round outputs of other machines are
    deliberately not candidates).  ``pool_out`` collects every produced
    (round, machine, set) for callers that want to inspect them.
    """
    n = instance.n
    rounds = config.rounds
    pool: list[tuple[int, int, tuple[int, ...]]] = []
    last_round_first: tuple[int, ...] = ()
    for rd in range(1, rounds + 1):
        assignment = RoundAssignment.draw(n, config.m, config.seed, rd)
        pooled = sorted({u for _, _, s in pool for u in s})
        calls_before = getattr(instance.oracle, "calls", 0)
        round_sets: list[tuple[int, ...]] = []
        shard_sizes: list[int] = []
        for i in range(config.m):
            shard = assignment.shard(i)
            shard_sizes.append(len(shard))
            cands = sorted(set(shard).union(pooled))
            round_sets.append(tuple(distorted_greedy(instance, cands)))
        if metrics is not None:
            metrics.append(RoundMetrics(rd, len(pool), len(pooled), shard_sizes,
                                        getattr(instance.oracle, "calls", 0) - calls_before))
        if pool_out is not None:
            pool_out.extend((rd, i + 1, s) for i, s in enumerate(round_sets))
        if rd < rounds:
            pool.extend((rd, i + 1, s) for i, s in enumerate(round_sets))
        else:
            last_round_first = round_sets[0]

    best: Solution | None = None
    candidates = pool + [(rounds, 1, last_round_first)]
    for rd, i, s in candidates:
        sol = Solution.evaluate(instance, s,
                                f"distributed[round={rd},machine={i}]")
        if best is None or sol.f_value > best.f_value:
            best = sol
    return best
