"""Normalised spectral clustering with a seeded k-means++ back end."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from .validation import check_matrix, check_n_communities

NORMALIZATIONS = ("symmetric", "sqrt-degree")


def _sq_dist(x, centers):
    d = (x * x).sum(1)[:, None] - 2 * x @ centers.T + (centers * centers).sum(1)[None, :]
    return np.maximum(d, 0.0)


def kmeans_plus_plus(x, k, rng) -> np.ndarray:
    """Pick ``k`` initial centers by D^2 sampling."""
    n = x.shape[0]
    idx = [int(rng.integers(n))]
    closest = _sq_dist(x, x[idx])[:, 0]
    for _ in range(1, k):
        total = closest.sum()
        if total > 0:
            nxt = int(rng.choice(n, p=closest / total))
        else:
            nxt = int(rng.integers(n))
        idx.append(nxt)
        closest = np.minimum(closest, _sq_dist(x, x[[nxt]])[:, 0])
    return x[idx].copy()


def _update_centers(x, labels, centers):
    k = centers.shape[0]
    new = centers.copy()
    counts = np.bincount(labels, minlength=k)
    for c in range(k):
        if counts[c]:
            new[c] = x[labels == c].mean(axis=0)
    empty = np.flatnonzero(counts == 0)
    if empty.size:
        # reseed an empty cluster at the worst-served point, if any is off-center
        d = _sq_dist(x, new)[np.arange(len(x)), labels]
        taken = set()
        for c in empty:
            order = np.argsort(-d, kind="stable")
            for p in order:
                if d[p] <= 0:
                    break
                if p not in taken and counts[labels[p]] > 1:
                    new[c] = x[p]
                    taken.add(p)
                    counts[labels[p]] -= 1
                    break
    return new


def lloyd(x, centers, max_iters=100):
    """Run Lloyd iterations from ``centers``.

    Returns
    -------
    labels : ndarray of shape (n,)
    centers : ndarray of shape (k, d)
    wcss_trace : list of float
        Within-cluster sum of squares after the initial assignment and after
        every iteration.
    """
    x = np.asarray(x, dtype=np.float64)
    d = _sq_dist(x, centers)
    labels = np.argmin(d, axis=1)
    trace = [float(d[np.arange(len(x)), labels].sum())]
    for _ in range(max_iters):
        centers = _update_centers(x, labels, centers)
        d = _sq_dist(x, centers)
        new = np.argmin(d, axis=1)
        trace.append(float(d[np.arange(len(x)), new].sum()))
        if np.array_equal(new, labels):
            break
        labels = new
    return labels, centers, trace


def kmeans(points, k, seed=None, restarts=10, max_iters=100, return_wcss=False):
    """Best-of-``restarts`` k-means with k-means++ seeding.

    Each restart draws from its own child of ``np.random.SeedSequence(seed)``.
    The run with the lowest within-cluster sum of squares wins; ties go to the
    earlier restart.
    """
    x = np.asarray(points, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    n = x.shape[0]
    if k < 1 or n < k:
        raise ValueError(f"k-means needs 1 <= k <= n, got k={k}, n={n}")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    best = None
    for child in np.random.SeedSequence(seed).spawn(restarts):
        rng = np.random.default_rng(child)
        labels, centers, trace = lloyd(x, kmeans_plus_plus(x, k, rng), max_iters)
        if best is None or trace[-1] < best[1]:
            best = (labels, trace[-1])
    labels, wcss = best
    return (labels, wcss) if return_wcss else labels


def spectral_embedding(b, k, normalization="symmetric"):
    """Top-``k`` eigenpairs of the degree-normalised matrix of ``b``.

    Returns eigenvalues in decreasing order and the row-normalised embedding.
    Zero-degree nodes get a zero embedding row.
    """
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"normalization must be one of {NORMALIZATIONS}")
    b = check_matrix(b, symmetric=True, nonnegative=True, name="B")
    deg = b.sum(axis=1)
    if normalization == "symmetric":
        with np.errstate(divide="ignore"):
            scale = np.where(deg > 0, 1.0 / np.sqrt(deg), 0.0)
    else:
        scale = np.sqrt(deg)
    m = b * scale[:, None] * scale[None, :]
    m = (m + m.T) / 2
    w, v = np.linalg.eigh(m)
    w, v = w[::-1][:k], v[:, ::-1][:, :k]
    tol = 1e-10
    for c in range(k):
        nz = np.flatnonzero(np.abs(v[:, c]) > tol)
        if nz.size and v[nz[0], c] < 0:
            v[:, c] = -v[:, c]
    norms = np.linalg.norm(v, axis=1)
    emb = np.divide(v, norms[:, None], out=np.zeros_like(v), where=norms[:, None] > tol)
    return w, emb


def spectral_cluster(b, k, seed=None, restarts=10, max_iters=100, normalization="symmetric"):
    """Cluster nodes from the spectral embedding of ``b`` with k-means."""
    b = check_matrix(b, square=True, name="B")
    k = check_n_communities(k, b.shape[0])
    if k == 1:
        return np.zeros(b.shape[0], dtype=np.int64)
    _, emb = spectral_embedding(b, k, normalization)
    return kmeans(emb, k, seed=seed, restarts=restarts, max_iters=max_iters)


class SpectralCommunityDetector(ClusterMixin, BaseEstimator):
    """Spectral clustering on a symmetric nonnegative node-similarity matrix.

    Parameters
    ----------
    n_communities : int, default=2
    n_init : int, default=10
        Number of k-means restarts.
    max_iter : int, default=100
        Lloyd iterations per restart.
    normalization : {'symmetric', 'sqrt-degree'}, default='symmetric'
        ``'symmetric'`` uses ``D^-1/2 B D^-1/2``; ``'sqrt-degree'`` uses
        ``D^1/2 B D^1/2``.
    random_state : int or None, default=None

    Attributes
    ----------
    labels_ : ndarray of shape (n_nodes,)
    eigenvalues_ : ndarray of shape (n_communities,)
    embedding_ : ndarray of shape (n_nodes, n_communities)
    """

    def __init__(self, n_communities=2, *, n_init=10, max_iter=100,
                 normalization="symmetric", random_state=None):
        self.n_communities = n_communities
        self.n_init = n_init
        self.max_iter = max_iter
        self.normalization = normalization
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_matrix(X, symmetric=True, nonnegative=True)
        k = check_n_communities(self.n_communities, X.shape[0])
        self.eigenvalues_, self.embedding_ = spectral_embedding(X, k, self.normalization)
        if k == 1:
            self.labels_ = np.zeros(X.shape[0], dtype=np.int64)
        else:
            self.labels_ = kmeans(self.embedding_, k, self.random_state, self.n_init,
                                  self.max_iter)
        self.n_features_in_ = X.shape[1]
        return self
