"""Partition quality: normalised mutual information, modularity, accuracy."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .graph import Graph, adjacency_a0


@dataclass(frozen=True)
class ContingencyTable:
    """Counts ``n_ij`` of nodes in true community ``i`` and computed community ``j``."""

    counts: np.ndarray
    row_sums: np.ndarray
    col_sums: np.ndarray
    n: int

    @classmethod
    def from_labels(cls, truth, computed) -> "ContingencyTable":
        truth, computed = _paired(truth, computed)
        _, ti = np.unique(truth, return_inverse=True)
        _, ci = np.unique(computed, return_inverse=True)
        counts = np.zeros((ti.max() + 1, ci.max() + 1), dtype=np.int64)
        np.add.at(counts, (ti, ci), 1)
        return cls(counts, counts.sum(1), counts.sum(0), int(counts.sum()))


def _paired(truth, computed):
    if isinstance(truth, dict) or isinstance(computed, dict):
        if not (isinstance(truth, dict) and isinstance(computed, dict)):
            raise TypeError("pass both labelings as dicts or both as sequences")
        if truth.keys() != computed.keys():
            raise ValueError("labelings cover different node sets")
        keys = sorted(truth)
        truth, computed = [truth[k] for k in keys], [computed[k] for k in keys]
    truth, computed = np.asarray(truth).ravel(), np.asarray(computed).ravel()
    if truth.shape != computed.shape:
        raise ValueError(f"labelings differ in length: {truth.size} vs {computed.size}")
    if truth.size == 0:
        raise ValueError("labelings are empty")
    return truth, computed


def _entropy_term(sizes, n):
    sizes = sizes[sizes > 0]
    return float(np.sum(sizes * np.log(sizes / n)))


def nmi(truth, computed) -> float:
    """Normalised mutual information with natural logarithms.

    When either labeling has a single community the ratio is 0/0; this
    returns 1.0 if both are single-community and 0.0 otherwise.
    """
    t = ContingencyTable.from_labels(truth, computed)
    hu, hv = _entropy_term(t.row_sums, t.n), _entropy_term(t.col_sums, t.n)
    if hu == 0 or hv == 0:
        return 1.0 if hu == hv == 0 else 0.0
    i, j = np.nonzero(t.counts)
    nij = t.counts[i, j].astype(np.float64)
    num = np.sum(nij * np.log(nij * t.n / (t.row_sums[i] * t.col_sums[j])))
    return float(num / np.sqrt(hu * hv))


def matched_accuracy(truth, computed) -> float:
    """Fraction of nodes agreeing after the best one-to-one relabelling.

    Computed communities left unmatched (more computed than true communities)
    count as errors.
    """
    t = ContingencyTable.from_labels(truth, computed)
    r, c = linear_sum_assignment(-t.counts)
    return float(t.counts[r, c].sum() / t.n)


def best_label_map(truth, computed) -> dict:
    """Optimal computed-label -> true-label mapping (Hungarian matching)."""
    truth, computed = _paired(truth, computed)
    tv, ti = np.unique(truth, return_inverse=True)
    cv, ci = np.unique(computed, return_inverse=True)
    counts = np.zeros((tv.size, cv.size), dtype=np.int64)
    np.add.at(counts, (ti, ci), 1)
    r, c = linear_sum_assignment(-counts)
    return {cv[b].item(): tv[a].item() for a, b in zip(r, c)}


def modularity_q(g: Graph, labels) -> float:
    """Newman modularity of a node partition, measured on the plain adjacency."""
    labels = np.asarray(labels).ravel()
    if labels.size != g.n:
        raise ValueError(f"partition covers {labels.size} nodes, graph has {g.n}")
    if g.n_edges == 0:
        raise ValueError("modularity is undefined on a graph without edges")
    a = adjacency_a0(g)
    total = a.sum()
    _, comm = np.unique(labels, return_inverse=True)
    onehot = np.zeros((g.n, comm.max() + 1))
    onehot[np.arange(g.n), comm] = 1.0
    within = np.einsum("ic,ij,jc->c", onehot, a, onehot)
    attached = onehot.T @ a.sum(axis=1)
    return float(np.sum(within / total - (attached / total) ** 2))


def select_k_by_q(g: Graph, fit_predict, k_range, trials=10, seed=None):
    """Pick the community count whose mean modularity over ``trials`` runs peaks.

    Parameters
    ----------
    g : Graph
    fit_predict : callable ``(graph, k, seed) -> labels``
        One unconstrained run of the model.
    k_range : iterable of int
    trials : int, default=10
    seed : int or None
        Master seed; trial ``t`` at the ``i``-th ``k`` uses the child
        ``SeedSequence(seed, spawn_key=(i, t))``.

    Returns
    -------
    k_best : int
        Ties go to the smallest ``k``.
    table : dict of int to float
        Mean modularity per ``k``.
    """
    ks = list(k_range)
    if not ks:
        raise ValueError("k_range is empty")
    table = {}
    for i, k in enumerate(ks):
        qs = []
        for t in range(trials):
            trial_seed = _child_seed(seed, (i, t))
            qs.append(modularity_q(g, fit_predict(g, k, trial_seed)))
        table[k] = float(np.mean(qs))
    best = max(table.values())
    k_best = min(k for k, q in table.items() if q == best)
    return k_best, table


def _child_seed(seed, key) -> int:
    entropy = 0 if seed is None else seed
    return int(np.random.SeedSequence(entropy, spawn_key=key).generate_state(1)[0])
