"""Pairwise must-link / cannot-link constraints and their encoding into A1.

A must-link pair gets weight ``alpha`` in the encoded matrix, a cannot-link
pair gets 0, everything else keeps its adjacency value. With ``alpha = 1`` and
every pair constrained the encoded matrix is exactly the consensus matrix of
the ground-truth partition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .validation import check_matrix


class ConstraintConflictError(ValueError):
    """A node pair appears as both must-link and cannot-link."""


def _canon(pairs: Iterable) -> frozenset:
    out = set()
    for i, j in pairs:
        i, j = int(i), int(j)
        if i == j:
            raise ValueError(f"constraint pair ({i}, {j}) is not a pair of distinct nodes")
        out.add((min(i, j), max(i, j)))
    return frozenset(out)


@dataclass(frozen=True)
class ConstraintSet:
    """Disjoint sets of unordered must-link and cannot-link node pairs."""

    must_link: frozenset = field(default_factory=frozenset)
    cannot_link: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        ml, cl = _canon(self.must_link), _canon(self.cannot_link)
        both = ml & cl
        if both:
            raise ConstraintConflictError(
                f"pair {min(both)} is both must-link and cannot-link"
            )
        object.__setattr__(self, "must_link", ml)
        object.__setattr__(self, "cannot_link", cl)

    def __len__(self):
        return len(self.must_link) + len(self.cannot_link)

    def max_node(self) -> int:
        return max((j for _, j in self.must_link | self.cannot_link), default=-1)

    @classmethod
    def from_labels(cls, pairs: Iterable, labels: Mapping[int, int]) -> "ConstraintSet":
        """Mark each pair must-link or cannot-link from ground-truth labels."""
        ml, cl = [], []
        for i, j in pairs:
            (ml if labels[i] == labels[j] else cl).append((i, j))
        return cls(frozenset(ml), frozenset(cl))


def encode_b(a1, cs: ConstraintSet, alpha: float = 2.0) -> np.ndarray:
    """Write the constraints into a copy of ``a1``.

    Parameters
    ----------
    a1 : ndarray of shape (n, n)
        Symmetric adjacency matrix with unit diagonal.
    cs : ConstraintSet
    alpha : float, default=2.0
        Weight given to must-link pairs.

    Returns
    -------
    ndarray of shape (n, n)
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    b = check_matrix(a1, symmetric=True, name="A1").copy()
    if cs.max_node() >= b.shape[0]:
        raise ValueError(f"constraint node {cs.max_node()} out of range for n={b.shape[0]}")
    if cs.must_link:
        i, j = np.array(sorted(cs.must_link)).T
        b[i, j] = b[j, i] = alpha
    if cs.cannot_link:
        i, j = np.array(sorted(cs.cannot_link)).T
        b[i, j] = b[j, i] = 0.0
    return b


def consensus_matrix(labels) -> np.ndarray:
    labels = np.asarray(labels)
    return (labels[:, None] == labels[None, :]).astype(np.float64)


def pair_universe(labels: Mapping[int, int]) -> list[tuple[int, int]]:
    """All unordered pairs of labelled nodes, in lexicographic order."""
    return list(combinations(sorted(labels), 2))


def sample_random_constraints(
    labels: Mapping[int, int], fraction: float, seed=None
) -> ConstraintSet:
    """Sample ``floor(fraction * #pairs)`` labelled pairs without replacement."""
    if not 0.0 <= fraction <= 1.0:
        raise ValueError(f"fraction must lie in [0, 1], got {fraction}")
    if not labels:
        raise ValueError("constraint sampling needs ground-truth labels")
    universe = pair_universe(labels)
    count = int(np.floor(fraction * len(universe) + 1e-9))
    rng = np.random.default_rng(seed)
    picked = rng.choice(len(universe), size=count, replace=False)
    return ConstraintSet.from_labels((universe[p] for p in np.sort(picked)), labels)


def hamming_distance(row_i, row_j) -> int:
    row_i, row_j = np.asarray(row_i), np.asarray(row_j)
    if row_i.shape != row_j.shape:
        raise ValueError(f"length mismatch: {row_i.shape} vs {row_j.shape}")
    return int(np.count_nonzero(row_i != row_j))


def pairwise_hamming(a, nodes: list[int]) -> np.ndarray:
    """Hamming distances between the rows ``nodes`` of ``a``, in universe order."""
    rows = np.asarray(a)[nodes]
    out = []
    for p in range(len(nodes) - 1):
        out.append(np.count_nonzero(rows[p] != rows[p + 1 :], axis=1))
    return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)


def sample_rule_based_constraints(
    a1, labels: Mapping[int, int], count: int, seed=None
) -> ConstraintSet:
    """Pick the ``count/2`` closest and ``count/2`` farthest row pairs of ``a1``.

    Distances are Hamming distances between rows. Pairs are listed in
    lexicographic order, then shuffled with ``seed`` so exact ties are broken
    reproducibly at random. The near half is chosen first and the far half
    from the remaining pairs.
    """
    if count % 2:
        raise ValueError(f"count must be even, got {count}")
    if not labels:
        raise ValueError("constraint selection needs ground-truth labels")
    universe = pair_universe(labels)
    if count > len(universe):
        raise ValueError(f"count={count} exceeds the {len(universe)} available pairs")
    dist = pairwise_hamming(a1, sorted(labels))
    rng = np.random.default_rng(seed)
    perm = rng.permutation(len(universe))
    order = perm[np.argsort(dist[perm], kind="stable")]
    half = count // 2
    near = order[:half]
    far = order[::-1][:half] if half else order[:0]
    chosen = np.concatenate([near, far])
    return ConstraintSet.from_labels((universe[p] for p in np.sort(chosen)), labels)


def emit_constraints(cs: ConstraintSet) -> str:
    lines = [(i, j, "ML") for i, j in cs.must_link] + [(i, j, "CL") for i, j in cs.cannot_link]
    return "\n".join(f"{i} {j} {kind}" for i, j, kind in sorted(lines))


def load_constraints(text: str) -> ConstraintSet:
    ml, cl = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if len(tok) != 3 or tok[2].upper() not in ("ML", "CL"):
            raise ValueError(f"line {lineno}: expected 'i j ML' or 'i j CL'")
        pair = (int(tok[0]), int(tok[1]))
        (ml if tok[2].upper() == "ML" else cl).append(pair)
    return ConstraintSet(frozenset(ml), frozenset(cl))


class ConstraintEncoder(TransformerMixin, BaseEstimator):
    """Transformer that writes pairwise constraints into an adjacency matrix.

    Parameters
    ----------
    must_link, cannot_link : sequence of (int, int), default=()
        Constrained node pairs.
    alpha : float, default=2.0
        Weight written for must-link pairs.
    """

    def __init__(self, must_link=(), cannot_link=(), alpha=2.0):
        self.must_link = must_link
        self.cannot_link = cannot_link
        self.alpha = alpha

    def fit(self, X, y=None):
        X = check_matrix(X, symmetric=True)
        self.constraints_ = ConstraintSet(self.must_link, self.cannot_link)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        return encode_b(X, self.constraints_, self.alpha)
