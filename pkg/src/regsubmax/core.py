"""Ground-set model shared by every algorithm in the package.

A problem instance is a monotone non-negative submodular value oracle ``g``,
a non-negative modular cost vector ``ell`` over the same dense ground set
``{0, .., n-1}``, and a cardinality budget ``k``.  Algorithms maximize
``f(S) = g(S) - ell(S)`` subject to ``|S| <= k`` and interact with the data
only through oracle evaluations, which makes call counting meaningful.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

ElementSet = Iterable[int]


class SubmodularOracle:
    """Value oracle for a set function over ``{0, .., n-1}``.

    Subclasses set ``n`` and implement ``value``.  ``marginal`` defaults to
    the two-evaluation difference; override it when something cheaper is
    available.  Oracles shipped in :mod:`regsubmax.objectives` are normalized
    so ``value(()) == 0`` and are monotone and submodular; neither property
    is checked per call (the test suite covers them).
    """

    n: int = 0

    def value(self, S: ElementSet) -> float:
        raise NotImplementedError

    def marginal(self, u: int, S: ElementSet) -> float:
        base = list(S)
        return self.value(base + [u]) - self.value(base)


class CountingOracle(SubmodularOracle):
    """Wraps an oracle and counts evaluations.

    One increment per ``value()`` or ``marginal()`` invocation on this
    wrapper; whatever the inner oracle does internally is not the caller's
    work and is not counted.  Increments are lock-protected so concurrent
    workers sharing a counter stay consistent.
    """

    def __init__(self, inner: SubmodularOracle):
        self.inner = inner
        self.n = inner.n
        self._lock = threading.Lock()
        self._value_calls = 0
        self._marginal_calls = 0

    def value(self, S: ElementSet) -> float:
        with self._lock:
            self._value_calls += 1
        return self.inner.value(S)

    def marginal(self, u: int, S: ElementSet) -> float:
        with self._lock:
            self._marginal_calls += 1
        return self.inner.marginal(u, S)

    @property
    def value_calls(self) -> int:
        return self._value_calls

    @property
    def marginal_calls(self) -> int:
        return self._marginal_calls

    @property
    def calls(self) -> int:
        return self._value_calls + self._marginal_calls


@dataclass(frozen=True)
class ModularCost:
    """Non-negative modular cost; ``cost(S)`` sums entries, ``cost[u]`` reads one."""

    costs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.costs, dtype=float)
        if arr.ndim != 1:
            raise ValueError("cost vector must be one-dimensional")
        if not np.all(np.isfinite(arr)):
            raise ValueError("cost vector must be finite")
        if np.any(arr < 0):
            raise ValueError("cost vector must be non-negative")
        object.__setattr__(self, "costs", arr)

    def __call__(self, S: ElementSet) -> float:
        idx = list(S)
        if not idx:
            return 0.0
        return float(self.costs[idx].sum())

    def __getitem__(self, u: int) -> float:
        return float(self.costs[u])

    def __len__(self) -> int:
        return self.costs.shape[0]


@dataclass
class RegularizedInstance:
    """Submodular-minus-modular objective under a cardinality budget."""

    oracle: SubmodularOracle
    cost: ModularCost
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("budget k must be >= 1")
        if len(self.cost) != self.oracle.n:
            raise ValueError("cost vector length must match the ground set")

    @property
    def n(self) -> int:
        return self.oracle.n

    def f(self, S: ElementSet) -> float:
        S = list(S)
        return self.oracle.value(S) - self.cost(S)

    def counted(self) -> tuple["RegularizedInstance", CountingOracle]:
        """Fresh counting wrapper around the same data."""
        counter = CountingOracle(self.oracle)
        return RegularizedInstance(counter, self.cost, self.k), counter


@dataclass(frozen=True)
class Solution:
    """An algorithm output: the set plus its score breakdown.

    ``provenance`` records which algorithm (and which internal copy, for the
    streaming variants) produced the set.  ``oracle_calls`` is filled from a
    CountingOracle when one is in play, else 0.
    """

    elements: tuple[int, ...]
    f_value: float
    g_value: float
    ell_value: float
    oracle_calls: int = 0
    provenance: str = ""

    @classmethod
    def evaluate(cls, instance: RegularizedInstance, elements: ElementSet,
                 provenance: str = "") -> "Solution":
        elems = tuple(elements)
        g = instance.oracle.value(elems)
        ell = instance.cost(elems)
        calls = getattr(instance.oracle, "calls", 0)
        return cls(elems, g - ell, g, ell, calls, provenance)


def best_solution(candidates: Iterable[Solution]) -> Solution:
    """First strict maximizer of f among candidates (order breaks ties)."""
    best = None
    for sol in candidates:
        if best is None or sol.f_value > best.f_value:
            best = sol
    if best is None:
        raise ValueError("no candidate solutions")
    return best
