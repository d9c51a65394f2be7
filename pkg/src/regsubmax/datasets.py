"""File ingestion and synthetic data generation.

Edge lists follow the common "src dst" whitespace format with '#' comment
lines.  Matrices and cost vectors are plain CSV.  Score tables are
word_id,element_id,value triples.  All loaders fail with the offending line
number; all generators are seed-deterministic.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .objectives import DirectedGraph


def load_edge_list(path) -> DirectedGraph:
    """Parse a directed edge list; dedupes, drops self-loops, compacts ids."""
    edges = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'src dst', got {line!r}")
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: non-integer node id in {line!r}") from exc
            edges.append((a, b))
    return DirectedGraph.from_edges(edges)


def write_edge_list(graph: DirectedGraph, path, comment: str = "") -> None:
    """Write dense-id edges, one per line, with an optional '#' header."""
    with open(path, "w") as fh:
        if comment:
            for line in comment.splitlines():
                fh.write(f"# {line}\n")
        for u, v in graph.edges():
            fh.write(f"{u} {v}\n")


def random_digraph(n: int, p: float, seed: int = 0) -> DirectedGraph:
    """G(n, p) style digraph without self-loops; isolated nodes are kept."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError("edge probability must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    mask = rng.random((n, n)) < p
    np.fill_diagonal(mask, False)
    out = tuple(tuple(int(v) for v in np.flatnonzero(mask[u])) for u in range(n))
    return DirectedGraph(n=n, out=out, original_ids=tuple(range(n)))


def load_matrix_csv(path, header: bool = False) -> np.ndarray:
    """Dense float matrix from CSV; `header` skips the first line."""
    M = np.loadtxt(path, delimiter=",", skiprows=1 if header else 0, ndmin=2)
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{path}: matrix entries must be finite")
    return M


def load_feature_matrix(path, header: bool = False) -> np.ndarray:
    return load_matrix_csv(path, header=header)


def load_similarity_matrix(path, header: bool = False) -> np.ndarray:
    M = load_matrix_csv(path, header=header)
    if M.shape[0] != M.shape[1]:
        raise ValueError(f"{path}: similarity matrix must be square, got {M.shape}")
    return M


def save_matrix_csv(M: np.ndarray, path) -> None:
    np.savetxt(path, np.asarray(M, dtype=float), delimiter=",", fmt="%.17g")


def load_score_table(path) -> list[tuple[int, int, float]]:
    """word_id,element_id,value triples; negative values are rejected here."""
    triples = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 'word,element,value'")
            try:
                w, e, v = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: malformed triple {line!r}") from exc
            if v < 0:
                raise ValueError(f"{path}:{lineno}: negative score {v}")
            triples.append((w, e, v))
    return triples


def load_cost_vector(path) -> np.ndarray:
    """One non-negative float per line (or a single CSV column)."""
    arr = np.loadtxt(path, delimiter=",", ndmin=1)
    if arr.ndim != 1:
        raise ValueError(f"{path}: expected a single column of costs")
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise ValueError(f"{path}: costs must be finite and non-negative")
    return arr


def load_stream_order(path, n: int | None = None) -> list[int]:
    """Newline-delimited element ids for replaying a fixed stream order."""
    order = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                order.append(int(line))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: non-integer id {line!r}") from exc
    if len(set(order)) != len(order):
        raise ValueError(f"{path}: duplicate ids in stream order")
    if n is not None:
        bad = [u for u in order if not 0 <= u < n]
        if bad:
            raise ValueError(f"{path}: ids {bad[:5]} outside ground set of size {n}")
    return order


def write_stream_order(order, path) -> None:
    with open(path, "w") as fh:
        for u in order:
            fh.write(f"{int(u)}\n")


def resolve_stream_order(spec: str, n: int, seed: int = 0) -> list[int]:
    """Element order for streaming runs: natural, shuffled, or file:PATH."""
    if spec == "natural":
        return list(range(n))
    if spec == "shuffled":
        rng = np.random.default_rng(seed)
        return [int(u) for u in rng.permutation(n)]
    if spec.startswith("file:"):
        return load_stream_order(spec[len("file:"):], n=n)
    raise ValueError(f"unknown stream order {spec!r} "
                     "(use 'natural', 'shuffled', or 'file:PATH')")


def save_generated_matrix(M: np.ndarray, path, meta: dict) -> None:
    """Matrix CSV plus a .meta.json sidecar recording how it was drawn."""
    save_matrix_csv(M, path)
    Path(str(path) + ".meta.json").write_text(json.dumps(meta, indent=2) + "\n")
