"""Model registry and the constraint-aware community detector."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, clone

from .constraints import ConstraintSet, encode_b
from .kernels import DiffusionKernelSimilarity
from .nmf import NMFCommunityDetector, NmfConfig, assign_partition, run_nmf
from .spectral import SpectralCommunityDetector, spectral_cluster
from .validation import check_matrix

MODELS = ("nmf-lse", "nmf-kl", "snmf", "spectral")
_NMF_VARIANT = {"nmf-lse": "lse", "nmf-kl": "kl", "snmf": "snmf"}


def detect(model: str, x, k: int, seed=None, *, iter=100, epsilon=1e-9, restarts=10,
           kmeans_max_iters=100, normalization="symmetric") -> np.ndarray:
    """Run one community-detection model on an objective matrix and return labels."""
    if model in _NMF_VARIANT:
        cfg = NmfConfig(k, iter, seed, epsilon, _NMF_VARIANT[model])
        return assign_partition(run_nmf(x, cfg).G)
    if model == "spectral":
        return spectral_cluster(x, k, seed, restarts, kmeans_max_iters, normalization)
    raise ValueError(f"unknown model {model!r}; choose from {MODELS}")


def make_estimator(model: str, k: int, seed=None, **kw):
    if model in _NMF_VARIANT:
        return NMFCommunityDetector(k, solver=_NMF_VARIANT[model], random_state=seed, **kw)
    if model == "spectral":
        return SpectralCommunityDetector(k, random_state=seed, **kw)
    raise ValueError(f"unknown model {model!r}; choose from {MODELS}")


class SemiSupervisedCommunityDetector(ClusterMixin, BaseEstimator):
    """Wrap a community detector so it sees pairwise constraints.

    ``fit`` takes the plain adjacency matrix of the graph, puts ones on its
    diagonal, writes the must-link / cannot-link pairs into it and fits a
    clone of ``estimator`` on the result.

    Parameters
    ----------
    estimator : estimator with ``fit_predict``, default=None
        Defaults to ``NMFCommunityDetector(2)``.
    alpha : float, default=2.0
        Weight of must-link pairs.
    objective : {'a1', 'sk'}, default='a1'
        ``'sk'`` replaces the adjacency by its diffusion-kernel similarity;
        constraints are not supported with it.
    beta : float, default=0.2
        Diffusion rate for ``objective='sk'``.

    Attributes
    ----------
    labels_ : ndarray of shape (n_nodes,)
    estimator_ : fitted clone of ``estimator``
    objective_matrix_ : ndarray of shape (n_nodes, n_nodes)
    """

    def __init__(self, estimator=None, *, alpha=2.0, objective="a1", beta=0.2):
        self.estimator = estimator
        self.alpha = alpha
        self.objective = objective
        self.beta = beta

    def fit(self, X, y=None, must_link=(), cannot_link=()):
        a0 = check_matrix(X, symmetric=True, nonnegative=True)
        cs = ConstraintSet(must_link, cannot_link)
        if self.objective == "a1":
            a1 = a0.copy()
            np.fill_diagonal(a1, 1.0)
            x = encode_b(a1, cs, self.alpha)
        elif self.objective == "sk":
            if len(cs):
                raise ValueError("constraints cannot be combined with the 'sk' objective")
            x = DiffusionKernelSimilarity(self.beta).fit_transform(a0)
            x = np.clip(x, 0.0, None)
        else:
            raise ValueError(f"objective must be 'a1' or 'sk', got {self.objective!r}")
        base = NMFCommunityDetector(2) if self.estimator is None else self.estimator
        self.estimator_ = clone(base)
        self.labels_ = np.asarray(self.estimator_.fit_predict(x))
        self.objective_matrix_ = x
        self.n_features_in_ = a0.shape[1]
        return self
