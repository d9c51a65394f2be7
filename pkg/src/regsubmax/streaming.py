"""One-pass threshold streaming for submodular-minus-modular maximization.

The basic accept rule compares an element's submodular marginal against its
modular cost scaled by a multiplier, and admits it when the surplus clears a
fixed threshold.  Picking the threshold needs knowledge of the optimum, so
:class:`ThresholdBank` maintains a geometric ladder of threshold guesses
anchored to the best singleton score seen so far, creating guesses lazily as
the anchor grows and retiring guesses that fall below the useful window.
On top of that, :func:`distorted_streaming` sweeps a small grid of target
quality ratios, each mapping to a trade-off parameter ``r``, and keeps the
best output across the grid.

Everything here is single-pass over the element stream: per element, each
live threshold copy spends at most one marginal evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import CountingOracle, RegularizedInstance, Solution

_SNAP = 1e-9


def approx_factor(r: float) -> float:
    """Quality coefficient of the threshold rule at trade-off r.

    Strictly increasing, 0 at r = 0, approaching 1/2 as r grows; at r = 1 it
    equals the inverse square of the golden ratio.
    """
    if r < 0:
        raise ValueError("trade-off r must be >= 0")
    return (2.0 * r + 1.0 - math.sqrt(4.0 * r * r + 1.0)) / 2.0


def cost_multiplier(r: float) -> float:
    """Factor applied to an element's cost inside the accept rule.

    Decreasing toward 1 as r -> 0; satisfies approx_factor(r) *
    cost_multiplier(r) == r, i.e. it is r / approx_factor(r).
    """
    if r < 0:
        raise ValueError("trade-off r must be >= 0")
    return (2.0 * r + 1.0 + math.sqrt(4.0 * r * r + 1.0)) / 2.0


def _snap_ceil(x: float) -> int:
    r = round(x)
    if abs(x - r) <= _SNAP:
        return int(r)
    return math.ceil(x)


def _snap_floor(x: float) -> int:
    r = round(x)
    if abs(x - r) <= _SNAP:
        return int(r)
    return math.floor(x)


def geometric_index_range(lo: float, hi: float, base: float) -> range:
    """Integer exponents i with lo <= base**i <= hi.

    Log-space boundaries within 1e-9 of an integer snap to it, so exact
    powers stay inside the window instead of flapping with rounding.
    """
    if base <= 1.0:
        raise ValueError("base must exceed 1")
    if lo <= 0.0 or hi <= 0.0 or hi < lo or math.isinf(hi):
        return range(0)
    lb = math.log(base)
    return range(_snap_ceil(math.log(lo) / lb),
                 _snap_floor(math.log(hi) / lb) + 1)


@dataclass
class ThresholdParams:
    """Fixed-threshold accept rule: marginal - multiplier * cost >= tau."""

    r: float
    tau: float
    k: int
    factor: float = field(init=False)
    multiplier: float = field(init=False)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("budget k must be >= 1")
        self.factor = approx_factor(self.r)
        self.multiplier = cost_multiplier(self.r)


@dataclass
class ThresholdState:
    """A single threshold run; accepts greedily until the budget fills."""

    params: ThresholdParams
    S: list[int] = field(default_factory=list)
    live: bool = True

    def offer(self, u: int, instance: RegularizedInstance) -> bool:
        """Accept/reject one stream element.  Dead runs reject for free."""
        if not self.live:
            return False
        p = self.params
        surplus = instance.oracle.marginal(u, self.S) - p.multiplier * instance.cost[u]
        if surplus >= p.tau:
            self.S.append(u)
            if len(self.S) >= p.k:
                self.live = False
            return True
        return False

    def finish(self, instance: RegularizedInstance,
               provenance: str = "threshold") -> Solution:
        """Better of the collected set and the empty set."""
        sol = Solution.evaluate(instance, self.S, provenance)
        empty = Solution.evaluate(instance, (), provenance + "[empty]")
        return sol if sol.f_value >= empty.f_value else empty


def threshold_streaming(stream, instance: RegularizedInstance, r: float,
                        tau: float, provenance: str | None = None) -> Solution:
    """Single pass with a known threshold tau at trade-off r."""
    state = ThresholdState(ThresholdParams(r, tau, instance.k))
    for u in stream:
        state.offer(u, instance)
    if provenance is None:
        provenance = f"threshold-streaming[r={r:.6g},tau={tau:.6g}]"
    return state.finish(instance, provenance)


def threshold_index_range(best_single: float, k: int, r: float,
                          eps: float) -> range:
    """Exponent window for useful threshold guesses given the running anchor.

    ``best_single`` is the largest singleton score factor*g({u}) - r*cost(u)
    seen so far.  Guesses below best_single/k are superseded; guesses above
    best_single * multiplier / r cannot have accepted anything yet, so they
    can be created fresh later.  Non-positive anchors give an empty window.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if best_single <= 0 or math.isinf(best_single):
        return range(0)
    hi = best_single * cost_multiplier(r) / r if r > 0 else math.inf
    return geometric_index_range(best_single / k, hi, 1.0 + eps)


class ThresholdBank:
    """Lazy ladder of threshold runs for one trade-off r.

    Copies are keyed by the integer exponent of their threshold (1+eps)**i.
    A copy created the moment its exponent enters the window behaves exactly
    like one created at stream start, because until then its threshold was
    too high to accept anything; that equivalence is what keeps the ladder
    small without changing any output.
    """

    def __init__(self, r: float, k: int, eps: float):
        if eps <= 0:
            raise ValueError("eps must be positive")
        if k < 1:
            raise ValueError("budget k must be >= 1")
        self.r = r
        self.k = k
        self.eps = eps
        self.best_single = -math.inf
        self.copies: dict[int, ThresholdState] = {}
        self._factor = approx_factor(r)

    def step(self, u: int, instance: RegularizedInstance,
             singleton_value: float | None = None) -> None:
        """Advance the bank by one stream element."""
        if singleton_value is None:
            singleton_value = instance.oracle.value((u,))
        score = self._factor * singleton_value - self.r * instance.cost[u]
        # A non-positive anchor opens no window either way; keeping -inf
        # until the first positive score makes that explicit.
        if score > 0.0 and score > self.best_single:
            self.best_single = score
        window = threshold_index_range(self.best_single, self.k, self.r, self.eps)
        for i in [i for i in self.copies if i not in window]:
            del self.copies[i]
        base = 1.0 + self.eps
        for i in window:
            if i not in self.copies:
                self.copies[i] = ThresholdState(ThresholdParams(self.r, base ** i, self.k))
        for i in sorted(self.copies):
            self.copies[i].offer(u, instance)

    def stored_elements(self) -> int:
        return sum(len(c.S) for c in self.copies.values())

    def live_copies(self) -> int:
        return sum(1 for c in self.copies.values() if c.live)

    def finish(self, instance: RegularizedInstance,
               label: str = "threshold-bank") -> Solution:
        """Best collected set across surviving copies, or the empty set."""
        best = Solution.evaluate(instance, (), f"{label}[empty]")
        for i in sorted(self.copies):
            sol = Solution.evaluate(instance, self.copies[i].S, f"{label}[i={i}]")
            if sol.f_value > best.f_value:
                best = sol
        return best


def beta_for_ratio(ratio: float) -> float:
    """Utility-to-cost ratio an optimum must have for a target ratio to be hit."""
    if not 0.0 < ratio < 0.5:
        raise ValueError("target ratio must lie in (0, 1/2)")
    return 4.0 * ratio / (1.0 - 2.0 * ratio) ** 2


def r_for_beta(beta: float) -> float:
    """Trade-off parameter tuned to utility-to-cost ratio beta."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    return beta / (2.0 * math.sqrt(1.0 + 2.0 * beta))


def ratio_for_beta(beta: float) -> float:
    """Quality ratio achieved at utility-to-cost ratio beta (inverse of beta_for_ratio)."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    return (1.0 + beta - math.sqrt(1.0 + 2.0 * beta)) / (2.0 * beta)


@dataclass(frozen=True)
class RatioGuess:
    """One grid entry: target quality ratio and the r tuned for it."""

    ratio: float
    beta: float
    r: float


def ratio_grid(eps: float, delta: float) -> list[RatioGuess]:
    """Geometric grid of target ratios eps * (1+delta)**i, clamped below 1/2.

    Every entry's trade-off satisfies r >= 2*eps, which keeps each bank's
    ladder short.  eps = 1/2 leaves an empty grid (the only candidate ratio
    is the invalid 1/2).
    """
    if not 0.0 < eps <= 0.5:
        raise ValueError("eps must lie in (0, 1/2]")
    if delta <= 0:
        raise ValueError("delta must be positive")
    top = _snap_floor(math.log(1.0 / (2.0 * eps)) / math.log(1.0 + delta))
    entries = []
    for i in range(top + 1):
        ratio = eps * (1.0 + delta) ** i
        if ratio >= 0.5:
            continue
        beta = beta_for_ratio(ratio)
        entries.append(RatioGuess(ratio, beta, r_for_beta(beta)))
    return entries


def distorted_streaming(stream, instance: RegularizedInstance, eps: float,
                        delta: float, taus: list[float] | None = None,
                        diagnostics: dict | None = None) -> Solution:
    """One pass over the stream, best output across the ratio grid.

    By default each grid entry runs a lazy ThresholdBank.  When ``taus`` is
    given (one threshold per grid entry, e.g. from an offline computation)
    each entry runs a single fixed-threshold copy instead.

    ``diagnostics``, if supplied, is filled with the grid, peak stored
    elements, peak copy counts, and per-element marginal-call counts (the
    latter only when the instance oracle is counting).
    """
    grid = ratio_grid(eps, delta)
    if taus is not None and len(taus) != len(grid):
        raise ValueError("need exactly one tau per grid entry")
    counting = instance.oracle if isinstance(instance.oracle, CountingOracle) else None

    banks: list[ThresholdBank] | None = None
    fixed: list[ThresholdState] | None = None
    if taus is None:
        banks = [ThresholdBank(g.r, instance.k, eps) for g in grid]
    else:
        fixed = [ThresholdState(ThresholdParams(g.r, t, instance.k))
                 for g, t in zip(grid, taus)]

    max_stored = 0
    max_copies = 0
    per_element_marginals: list[int] = []
    for u in stream:
        before = counting.marginal_calls if counting is not None else 0
        if banks is not None:
            singleton = instance.oracle.value((u,))
            for bank in banks:
                bank.step(u, instance, singleton)
            if diagnostics is not None:
                max_stored = max(max_stored, sum(b.stored_elements() for b in banks))
                max_copies = max(max_copies, sum(len(b.copies) for b in banks))
        else:
            for state in fixed:
                state.offer(u, instance)
            if diagnostics is not None:
                max_stored = max(max_stored, sum(len(s.S) for s in fixed))
                max_copies = max(max_copies, len(fixed))
        if diagnostics is not None and counting is not None:
            per_element_marginals.append(counting.marginal_calls - before)

    best = Solution.evaluate(instance, (), "distorted-streaming[empty]")
    if banks is not None:
        for g, bank in zip(grid, banks):
            sol = bank.finish(instance, f"distorted-streaming[ratio={g.ratio:.6g}]")
            if sol.f_value > best.f_value:
                best = sol
    else:
        for g, state in zip(grid, fixed):
            sol = state.finish(instance, f"distorted-streaming[ratio={g.ratio:.6g}]")
            if sol.f_value > best.f_value:
                best = sol

    if diagnostics is not None:
        diagnostics["grid"] = grid
        diagnostics["max_stored"] = max_stored
        diagnostics["max_copies"] = max_copies
        diagnostics["per_element_marginals"] = per_element_marginals
    return best
