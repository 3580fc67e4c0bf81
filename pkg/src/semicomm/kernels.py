"""Diffusion-kernel similarity, an alternative NMF objective matrix."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .graph import Graph, adjacency_a0
from .validation import check_matrix


def opposite_laplacian(g: Graph) -> np.ndarray:
    """``A0 - D``: ones on edges, minus the degree on the diagonal."""
    a = adjacency_a0(g)
    return laplacian_from_adjacency(a)


def laplacian_from_adjacency(a) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    np.fill_diagonal(a, 0.0)
    a[np.diag_indices_from(a)] = -a.sum(axis=1)
    return a


def symmetric_expm(m, scale: float = 1.0) -> np.ndarray:
    """``expm(scale * m)`` for symmetric ``m`` via an eigendecomposition."""
    m = check_matrix(m, symmetric=True, name="L")
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise ArithmeticError(f"eigendecomposition failed: {exc}") from exc
    k = (v * np.exp(scale * w)) @ v.T
    return (k + k.T) / 2


def diffusion_kernel(lap, beta: float = 0.2) -> np.ndarray:
    """Heat kernel ``expm(beta * L)`` of an opposite Laplacian."""
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    return symmetric_expm(lap, beta)


def similarity_sk(k) -> np.ndarray:
    """Cosine-style normalisation ``K_ij / sqrt(K_ii K_jj)``."""
    k = check_matrix(k, symmetric=True, name="K")
    d = np.diag(k)
    if (d <= 0).any():
        i = int(np.argmax(d <= 0))
        raise ValueError(f"kernel diagonal must be positive, K[{i},{i}] = {d[i]}")
    s = 1.0 / np.sqrt(d)
    sk = k * np.outer(s, s)
    sk = (sk + sk.T) / 2
    np.fill_diagonal(sk, 1.0)
    return sk


class DiffusionKernelSimilarity(TransformerMixin, BaseEstimator):
    """Map an adjacency matrix to its normalised diffusion-kernel similarity.

    Parameters
    ----------
    beta : float, default=0.2
        Diffusion rate.
    """

    def __init__(self, beta=0.2):
        self.beta = beta

    def fit(self, X, y=None):
        X = check_matrix(X, symmetric=True)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        X = check_matrix(X, symmetric=True)
        return similarity_sk(diffusion_kernel(laplacian_from_adjacency(X), self.beta))
