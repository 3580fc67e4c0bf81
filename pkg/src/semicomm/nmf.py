"""Multiplicative-update NMF solvers used for community detection.

Three objectives are supported:

* ``lse``:  ``||X - F G^T||_F^2``
* ``kl``:   generalised Kullback-Leibler divergence ``D(X || F G^T)``
* ``snmf``: ``||X - G S G^T||_F^2`` for square symmetric ``X``

``F`` and ``G`` start from i.i.d. uniform draws on ``(0, 1]``; the SNMF
middle factor ``S`` starts near the identity (see :func:`snmf`). Every solver
runs a fixed number of iterations. Node ``i`` is put in the community of the largest entry
of row ``i`` of ``G``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import kl_div
from sklearn.base import BaseEstimator, ClusterMixin

from .validation import check_matrix, check_n_communities

VARIANTS = ("lse", "kl", "snmf")


@dataclass(frozen=True)
class NmfConfig:
    k: int
    iter: int = 100
    seed: int | None = None
    epsilon: float = 1e-9
    variant: str = "lse"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.iter < 1:
            raise ValueError(f"iter must be >= 1, got {self.iter}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")


@dataclass
class FactorPair:
    """Result of an NMF run.

    ``S`` is only set by the symmetric variant, where ``F`` is ``G``.
    ``objective_trace[t]`` is the objective after iteration ``t + 1``.
    """

    F: np.ndarray
    G: np.ndarray
    S: np.ndarray | None = None
    objective_trace: np.ndarray = field(default_factory=lambda: np.zeros(0))


def _uniform(rng, shape):
    # (0, 1] keeps multiplicative updates away from absorbing zeros
    return 1.0 - rng.random(shape)


def lse_objective(x, f, g) -> float:
    r = x - f @ g.T
    return float(np.sum(r * r))


def kl_objective(x, f, g) -> float:
    return float(np.sum(kl_div(x, f @ g.T)))


def snmf_objective(x, g, s) -> float:
    r = x - g @ s @ g.T
    return float(np.sum(r * r))


def lse_step(x, f, g, eps):
    f = f * (x @ g) / np.maximum(f @ (g.T @ g), eps)
    g = g * (x.T @ f) / np.maximum(g @ (f.T @ f), eps)
    return f, g


def kl_step(x, f, g, eps):
    ratio = x / np.maximum(f @ g.T, eps)
    f = f * (ratio @ g) / np.maximum(g.sum(axis=0), eps)
    ratio = x / np.maximum(f @ g.T, eps)
    g = g * (ratio.T @ f) / np.maximum(f.sum(axis=0), eps)
    return f, g


def snmf_step(x, g, s, eps):
    gs = g @ s
    g = g * (x @ gs) / np.maximum(gs @ (g.T @ g) @ s, eps)
    gtg = g.T @ g
    s = s * (g.T @ x @ g) / np.maximum(gtg @ s @ gtg, eps)
    return g, s


def nmf_lse(x, cfg: NmfConfig, init=None) -> FactorPair:
    """Least-squares NMF ``X ~ F G^T`` by Lee-Seung multiplicative updates.

    ``init`` optionally supplies starting ``(F, G)``; otherwise both are drawn
    from ``cfg.seed``.
    """
    x = check_matrix(x, nonnegative=True)
    f, g = _init_pair(x, cfg, init)
    trace = np.empty(cfg.iter)
    for t in range(cfg.iter):
        f, g = lse_step(x, f, g, cfg.epsilon)
        trace[t] = lse_objective(x, f, g)
    return FactorPair(f, g, None, trace)


def nmf_kl(x, cfg: NmfConfig, init=None) -> FactorPair:
    """KL-divergence NMF ``X ~ F G^T`` by multiplicative updates.

    The objective uses the convention ``0 log 0 = 0``.
    """
    x = check_matrix(x, nonnegative=True)
    f, g = _init_pair(x, cfg, init)
    trace = np.empty(cfg.iter)
    for t in range(cfg.iter):
        f, g = kl_step(x, f, g, cfg.epsilon)
        trace[t] = kl_objective(x, f, g)
    return FactorPair(f, g, None, trace)


SNMF_OFFDIAG_SCALE = 0.01


def snmf(x, cfg: NmfConfig, init=None) -> FactorPair:
    """Symmetric tri-factorisation ``X ~ G S G^T`` with nonnegative ``G``, ``S``.

    ``S`` starts at the identity plus uniform off-diagonal entries scaled by
    ``SNMF_OFFDIAG_SCALE``. A fully random ``S`` couples the columns of ``G``
    from the first step and often lets one large community absorb both
    columns, zeroing out the rows of a smaller one for good.
    """
    x = check_matrix(x, symmetric=True, nonnegative=True)
    n, k = x.shape[0], cfg.k
    if init is None:
        rng = np.random.default_rng(cfg.seed)
        g = _uniform(rng, (n, k))
        off = _uniform(rng, (k, k)) * SNMF_OFFDIAG_SCALE
        s = np.eye(k) + off - np.diag(np.diag(off))
    else:
        g, s = (np.array(a, dtype=np.float64) for a in init)
    trace = np.empty(cfg.iter)
    for t in range(cfg.iter):
        g, s = snmf_step(x, g, s, cfg.epsilon)
        trace[t] = snmf_objective(x, g, s)
    return FactorPair(g, g, s, trace)


def _init_pair(x, cfg, init):
    if init is not None:
        f, g = (np.array(a, dtype=np.float64) for a in init)
        return f, g
    rng = np.random.default_rng(cfg.seed)
    f = _uniform(rng, (x.shape[0], cfg.k))
    g = _uniform(rng, (x.shape[1], cfg.k))
    return f, g


SOLVERS = {"lse": nmf_lse, "kl": nmf_kl, "snmf": snmf}


def run_nmf(x, cfg: NmfConfig) -> FactorPair:
    return SOLVERS[cfg.variant](x, cfg)


def assign_partition(g_factor) -> np.ndarray:
    """Row-wise argmax of the community-membership factor.

    Ties go to the lowest column index.
    """
    return np.argmax(np.asarray(g_factor), axis=1)


class NMFCommunityDetector(ClusterMixin, BaseEstimator):
    """Community detection by nonnegative factorisation of a node-similarity matrix.

    Parameters
    ----------
    n_communities : int, default=2
    solver : {'lse', 'kl', 'snmf'}, default='lse'
        Objective minimised by the multiplicative updates.
    max_iter : int, default=100
        Number of update rounds (no early stopping).
    epsilon : float, default=1e-9
        Floor applied to every update denominator.
    random_state : int or None, default=None
        Seed for the uniform factor initialisation.

    Attributes
    ----------
    labels_ : ndarray of shape (n_nodes,)
    factors_ : FactorPair
    objective_trace_ : ndarray of shape (max_iter,)

    Examples
    --------
    >>> import numpy as np
    >>> from semicomm.nmf import NMFCommunityDetector
    >>> X = np.kron(np.eye(2), np.ones((3, 3)))
    >>> NMFCommunityDetector(2, random_state=0).fit_predict(X).tolist()
    [1, 1, 1, 0, 0, 0]
    """

    def __init__(self, n_communities=2, *, solver="lse", max_iter=100, epsilon=1e-9,
                 random_state=None):
        self.n_communities = n_communities
        self.solver = solver
        self.max_iter = max_iter
        self.epsilon = epsilon
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_matrix(X, square=True, nonnegative=True)
        k = check_n_communities(self.n_communities, X.shape[0])
        cfg = NmfConfig(k, self.max_iter, self.random_state, self.epsilon, self.solver)
        self.factors_ = run_nmf(X, cfg)
        self.objective_trace_ = self.factors_.objective_trace
        self.labels_ = assign_partition(self.factors_.G)
        self.n_features_in_ = X.shape[1]
        return self
