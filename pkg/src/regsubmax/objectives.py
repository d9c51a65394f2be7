"""Concrete value oracles and cost constructions.

Everything here is desk-scale: dense float64 matrices, Python sets for
adjacency, no sparse formats.  All value oracles are normalized so that
``value(()) == 0`` and all are monotone and submodular (the property suite in
the tests checks each one).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .core import ElementSet, ModularCost, SubmodularOracle


class DegenerateMatrixError(ValueError):
    """A matrix that should be positive definite numerically is not."""


@dataclass(frozen=True)
class DirectedGraph:
    """Directed graph on a dense ground set ``{0, .., n-1}``.

    ``out`` holds sorted out-neighbor tuples.  ``original_ids`` maps a dense
    id back to whatever label the source file used, so results can be
    reported in the input's vocabulary.
    """

    n: int
    out: tuple[tuple[int, ...], ...]
    original_ids: tuple[int, ...]

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]]) -> "DirectedGraph":
        """Build from (src, dst) pairs; dedupes, drops self-loops, compacts ids."""
        clean = {(a, b) for a, b in edges if a != b}
        nodes = sorted({a for a, _ in clean} | {b for _, b in clean})
        dense = {orig: i for i, orig in enumerate(nodes)}
        adj: list[set[int]] = [set() for _ in nodes]
        for a, b in clean:
            adj[dense[a]].add(dense[b])
        return cls(
            n=len(nodes),
            out=tuple(tuple(sorted(s)) for s in adj),
            original_ids=tuple(nodes),
        )

    @property
    def id_map(self) -> dict[int, int]:
        return {orig: i for i, orig in enumerate(self.original_ids)}

    def out_degrees(self) -> np.ndarray:
        return np.array([len(s) for s in self.out], dtype=int)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.out[u]]


def vertex_cover_cost(out_degrees: Sequence[int], q: int) -> ModularCost:
    """Per-node cost 1 + max(0, degree - q): high-degree nodes cost extra."""
    d = np.asarray(out_degrees, dtype=float)
    return ModularCost(1.0 + np.maximum(0.0, d - float(q)))


def vertex_cover_value(graph: DirectedGraph, weights: Sequence[float],
                       S: ElementSet) -> float:
    """Total weight of S together with everything S points at."""
    members = list(S)
    if not members:
        return 0.0
    w = np.asarray(weights, dtype=float)
    covered = set(members)
    for u in members:
        covered.update(graph.out[u])
    return float(w[sorted(covered)].sum())


class VertexCoverOracle(SubmodularOracle):
    """Weighted directed coverage: g(S) = weight of S plus its out-neighbors."""

    def __init__(self, graph: DirectedGraph, weights: Sequence[float] | None = None):
        self.graph = graph
        self.n = graph.n
        if weights is None:
            weights = np.ones(graph.n)
        self.weights = np.asarray(weights, dtype=float)
        if self.weights.shape != (graph.n,):
            raise ValueError("weights length must match node count")
        if np.any(self.weights < 0):
            raise ValueError("node weights must be non-negative")
        self._cover = tuple(frozenset((u,) + graph.out[u]) for u in range(graph.n))

    def value(self, S: ElementSet) -> float:
        members = list(S)
        if not members:
            return 0.0
        covered: set[int] = set()
        for u in members:
            covered.update(self._cover[u])
        return float(self.weights[sorted(covered)].sum())

    def marginal(self, u: int, S: ElementSet) -> float:
        members = list(S)
        if not members:
            return self.value([u])
        covered: set[int] = set()
        for v in members:
            covered.update(self._cover[v])
        gained = sorted(self._cover[u] - covered)
        if not gained:
            return 0.0
        return float(self.weights[gained].sum())


def similarity_from_features(X: np.ndarray, metric: str = "euclidean") -> np.ndarray:
    """Dense similarity matrix M[i, j] = exp(-dist(x_i, x_j)).

    Entries land in (0, 1] with an exact unit diagonal; the matrix is
    symmetrized to kill float asymmetry from the distance computation.
    """
    if metric != "euclidean":
        raise ValueError(f"unsupported metric {metric!r}")
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if not np.all(np.isfinite(X)):
        raise ValueError("features must be finite")
    sq = (X * X).sum(axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    np.clip(d2, 0.0, None, out=d2)
    M = np.exp(-np.sqrt(d2))
    M = 0.5 * (M + M.T)
    np.fill_diagonal(M, 1.0)
    return M


def facility_location_value(M: np.ndarray, S: ElementSet) -> float:
    """Average over rows of the best similarity to a chosen column."""
    cols = sorted(set(S))
    if not cols:
        return 0.0
    return float(M[:, cols].max(axis=1).mean())


class FacilityLocationOracle(SubmodularOracle):
    def __init__(self, M: np.ndarray):
        M = np.asarray(M, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("similarity matrix must be square")
        self.M = M
        self.n = M.shape[0]

    def value(self, S: ElementSet) -> float:
        return facility_location_value(self.M, S)


def logdet_value(M: np.ndarray, alpha: float, S: ElementSet) -> float:
    """log det(I + alpha * M_S) via Cholesky on the principal submatrix."""
    idx = sorted(set(S))
    if not idx:
        return 0.0
    A = np.eye(len(idx)) + alpha * M[np.ix_(idx, idx)]
    try:
        L = np.linalg.cholesky(A)
    except np.linalg.LinAlgError as exc:
        raise DegenerateMatrixError(
            f"I + alpha*M_S not positive definite for S={idx}") from exc
    return float(2.0 * np.log(np.diag(L)).sum())


class LogDetOracle(SubmodularOracle):
    """Diversity score g(S) = log det(I + alpha * M_S), alpha > 0, M PSD."""

    def __init__(self, M: np.ndarray, alpha: float = 1.0):
        M = np.asarray(M, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("kernel matrix must be square")
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        self.M = M
        self.alpha = float(alpha)
        self.n = M.shape[0]

    def value(self, S: ElementSet) -> float:
        return logdet_value(self.M, self.alpha, S)


def saturating_coverage_value(word_scores: dict[int, dict[int, float]],
                              S: ElementSet) -> float:
    """Sum over words of sqrt(total score contributed by chosen elements)."""
    members = set(S)
    if not members:
        return 0.0
    total = 0.0
    for scores in word_scores.values():
        acc = sum(v for e, v in scores.items() if e in members)
        if acc > 0.0:
            total += math.sqrt(acc)
    return total


class SaturatingCoverageOracle(SubmodularOracle):
    """Concave-over-modular coverage built from (word, element, score) triples."""

    def __init__(self, triples: Iterable[tuple[int, int, float]], n: int):
        self.n = n
        table: dict[int, dict[int, float]] = {}
        for w, e, v in triples:
            if v < 0:
                raise ValueError(f"negative score {v} for word {w}, element {e}")
            if not 0 <= e < n:
                raise ValueError(f"element id {e} outside ground set of size {n}")
            table.setdefault(w, {})[e] = table.get(w, {}).get(e, 0.0) + v
        self.word_scores = table

    def value(self, S: ElementSet) -> float:
        return saturating_coverage_value(self.word_scores, S)


class ModularOracle(SubmodularOracle):
    """Modular g (degenerate submodular case); handy for benchmarks and tests."""

    def __init__(self, weights: Sequence[float]):
        w = np.asarray(weights, dtype=float)
        if np.any(w < 0):
            raise ValueError("modular weights must be non-negative")
        self.weights = w
        self.n = w.shape[0]

    def value(self, S: ElementSet) -> float:
        idx = list(S)
        if not idx:
            return 0.0
        return float(self.weights[idx].sum())

    def marginal(self, u: int, S: ElementSet) -> float:
        return float(self.weights[u])


@dataclass
class ReservoirEstimator:
    """Uniform fixed-size sample of a stream (classic one-pass replacement).

    Keeps every prefix uniformly represented: the first ``capacity`` items
    fill the reservoir, after which item number t replaces a uniformly random
    slot with probability capacity / t.
    """

    capacity: int
    seed: int = 0

    def __post_init__(self):
        if self.capacity < 0:
            raise ValueError("capacity must be >= 0")
        self.items: list[int] = []
        self.seen = 0
        self._rng = random.Random(self.seed)

    def update(self, item: int) -> "ReservoirEstimator":
        self.seen += 1
        if len(self.items) < self.capacity:
            self.items.append(item)
        else:
            j = self._rng.randrange(self.seen)
            if j < self.capacity:
                self.items[j] = item
        return self


def reservoir_update(est: ReservoirEstimator, item: int) -> ReservoirEstimator:
    return est.update(item)


def reservoir_facility_estimate(est: ReservoirEstimator,
                                similarity_rows: Callable[[int], np.ndarray],
                                S: ElementSet) -> float:
    """Facility-location estimate from the sampled rows only.

    Computes mean over reservoir items i of max_{j in S} M[i, j]; unbiased
    for the exact average because the reservoir is uniform.
    """
    if not est.items:
        raise ValueError("reservoir is empty; estimate undefined")
    cols = sorted(set(S))
    if not cols:
        return 0.0
    total = 0.0
    for i in est.items:
        row = similarity_rows(i)
        total += float(np.max(row[cols]))
    return total / len(est.items)
