"""Undirected simple graphs, adjacency variants and plain-text I/O.

Nodes are 0-indexed internally. One-indexed files (as written by the LFR
tools and most MATLAB pipelines) are shifted at the I/O boundary only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping

import numpy as np


class GraphFormatError(ValueError):
    """Raised when an edge-list or label file cannot be parsed."""


def _base(indexing: str) -> int:
    if indexing == "zero":
        return 0
    if indexing == "one":
        return 1
    raise ValueError(f"indexing must be 'zero' or 'one', got {indexing!r}")


@dataclass(frozen=True)
class Graph:
    """Undirected, unweighted simple graph.

    Parameters
    ----------
    n : int
        Number of nodes.
    edges : iterable of (int, int)
        Unordered node pairs. Duplicates and orientation are normalised away.
    labels : mapping of int to int, optional
        Ground-truth community of each node. May cover only a subset of the
        nodes.
    """

    n: int
    edges: frozenset = field(default_factory=frozenset)
    labels: Mapping[int, int] | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        canon = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
            canon.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(canon))
        if self.labels is not None:
            labels = {int(k): int(c) for k, c in self.labels.items()}
            bad = [k for k in labels if not 0 <= k < self.n]
            if bad:
                raise ValueError(f"labelled node {bad[0]} out of range for n={self.n}")
            object.__setattr__(self, "labels", labels)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def labelled_nodes(self) -> list[int]:
        return sorted(self.labels) if self.labels else []

    def label_array(self, fill: int = -1) -> np.ndarray:
        """Labels as an int array of length n, ``fill`` for unlabelled nodes."""
        out = np.full(self.n, fill, dtype=np.int64)
        for k, c in (self.labels or {}).items():
            out[k] = c
        return out

    def with_labels(self, labels: Mapping[int, int] | None) -> "Graph":
        return Graph(self.n, self.edges, labels)

    @classmethod
    def from_adjacency(cls, a: np.ndarray, labels=None) -> "Graph":
        a = np.asarray(a)
        iu, ju = np.nonzero(np.triu(a, k=1))
        return cls(a.shape[0], frozenset(zip(iu.tolist(), ju.tolist())), labels)


def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line.split()


def load_edge_list(text: str, indexing: str = "zero", n: int | None = None) -> Graph:
    """Parse whitespace-separated ``u v`` lines into a :class:`Graph`.

    ``#`` comment lines and blank lines are skipped. Extra tokens after the
    first two (e.g. LFR weights) are ignored. ``n`` defaults to the largest
    node id plus one.
    """
    base = _base(indexing)
    edges = set()
    max_id = -1
    for lineno, tok in _data_lines(text):
        if len(tok) < 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v', got {' '.join(tok)!r}")
        try:
            u, v = int(tok[0]), int(tok[1])
        except ValueError:
            raise GraphFormatError(
                f"line {lineno}: non-integer node id in {' '.join(tok)!r}"
            ) from None
        if u == v:
            raise GraphFormatError(f"line {lineno}: self-loop at node {u}")
        u, v = u - base, v - base
        if u < 0 or v < 0:
            raise GraphFormatError(f"line {lineno}: node id below index base {base}")
        edges.add((min(u, v), max(u, v)))
        max_id = max(max_id, u, v)
    if n is None:
        n = max_id + 1
    elif max_id >= n:
        raise GraphFormatError(f"node id {max_id + base} exceeds declared n={n}")
    return Graph(n, frozenset(edges))


def load_labels(text: str, indexing: str = "zero", n: int | None = None) -> dict[int, int]:
    """Parse ``node community`` lines.

    Community ids are recoded to ``0..k-1`` in order of first appearance.
    """
    base = _base(indexing)
    out: dict[int, int] = {}
    codes: dict[str, int] = {}
    for lineno, tok in _data_lines(text):
        if len(tok) < 2:
            raise GraphFormatError(f"line {lineno}: expected 'node community'")
        try:
            node = int(tok[0]) - base
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer node id {tok[0]!r}") from None
        if node < 0 or (n is not None and node >= n):
            raise GraphFormatError(f"line {lineno}: node {tok[0]} out of range")
        if node in out:
            raise GraphFormatError(f"line {lineno}: duplicate node {tok[0]}")
        out[node] = codes.setdefault(tok[1], len(codes))
    return out


def load_node_list(text: str, indexing: str = "zero") -> list[int]:
    """Parse one node id per line (used for exclusion lists)."""
    base = _base(indexing)
    nodes = []
    for lineno, tok in _data_lines(text):
        try:
            nodes.append(int(tok[0]) - base)
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer node id {tok[0]!r}") from None
    return nodes


def emit_edge_list(g: Graph) -> str:
    """Sorted ``u v`` lines with ``u < v``, 0-indexed."""
    return "\n".join(f"{u} {v}" for u, v in g.sorted_edges())


def emit_labels(labels: Mapping[int, int] | Iterable[int]) -> str:
    if not isinstance(labels, Mapping):
        labels = dict(enumerate(int(c) for c in labels))
    return "\n".join(f"{k} {labels[k]}" for k in sorted(labels))


def adjacency_a0(g: Graph) -> np.ndarray:
    """Plain adjacency matrix: 1 on edges, 0 elsewhere including the diagonal."""
    a = np.zeros((g.n, g.n))
    if g.edges:
        idx = np.array(g.sorted_edges())
        a[idx[:, 0], idx[:, 1]] = 1.0
        a[idx[:, 1], idx[:, 0]] = 1.0
    return a


def adjacency_a1(g: Graph) -> np.ndarray:
    """Adjacency matrix with ones on the diagonal."""
    a = adjacency_a0(g)
    np.fill_diagonal(a, 1.0)
    return a


def adjacency_complement(g: Graph) -> np.ndarray:
    return 1.0 - adjacency_a0(g)


def load_karate() -> Graph:
    """Zachary's karate club with the two-faction split as ground truth."""
    pkg = resources.files("semicomm.data")
    g = load_edge_list(pkg.joinpath("karate_edges.txt").read_text())
    labels = load_labels(pkg.joinpath("karate_labels.txt").read_text(), n=g.n)
    return g.with_labels(labels)


def load_graph_files(
    edges_path, labels_path=None, indexing: str = "zero", exclude_path=None
) -> Graph:
    """Read an edge-list file plus optional label and exclusion files.

    Nodes listed in the exclusion file keep their edges but lose their
    ground-truth label.
    """
    with open(edges_path) as fh:
        g = load_edge_list(fh.read(), indexing)
    labels = None
    if labels_path is not None:
        with open(labels_path) as fh:
            labels = load_labels(fh.read(), indexing)
        n = max(g.n, max(labels, default=-1) + 1)
        g = Graph(n, g.edges)
    g = g.with_labels(labels)
    if exclude_path is not None and labels is not None:
        with open(exclude_path) as fh:
            g = drop_labels(g, load_node_list(fh.read(), indexing))
    return g


def drop_labels(g: Graph, nodes) -> Graph:
    """Forget the ground truth of ``nodes`` and renumber the remaining communities."""
    if not g.labels:
        return g
    drop = set(nodes)
    codes: dict[int, int] = {}
    labels = {k: codes.setdefault(c, len(codes))
              for k, c in sorted(g.labels.items()) if k not in drop}
    return g.with_labels(labels)


def football_exclusions() -> list[int]:
    """Zero-based ids of the five unlabelled independent teams in the football network."""
    text = resources.files("semicomm.data").joinpath("football_exclude.txt").read_text()
    return load_node_list(text, "one")
