"""Girvan-Newman planted-partition benchmark graphs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph


@dataclass(frozen=True)
class GnConfig:
    """Parameters of a GN benchmark network.

    Every node has on average ``total_degree`` neighbours, ``z_out`` of which
    lie outside its own community. Edges are independent Bernoulli draws
    (planted-partition model) so the degrees hold in expectation.
    """

    z_out: float = 8.0
    n: int = 128
    k: int = 4
    total_degree: float = 16.0
    seed: int | None = 0

    def __post_init__(self):
        if self.k < 1 or self.n % self.k:
            raise ValueError(f"n={self.n} must be divisible by k={self.k}")
        if not 0 <= self.z_out <= self.total_degree:
            raise ValueError(
                f"z_out={self.z_out} must lie in [0, total_degree={self.total_degree}]"
            )

    @property
    def z_in(self) -> float:
        return self.total_degree - self.z_out

    @property
    def community_size(self) -> int:
        return self.n // self.k

    @property
    def p_in(self) -> float:
        return self.z_in / (self.community_size - 1)

    @property
    def p_out(self) -> float:
        if self.k == 1:
            return 0.0
        return self.z_out / (self.n - self.community_size)


def generate_gn(cfg: GnConfig) -> Graph:
    """Draw a GN network; labels are the planted communities.

    Uses numpy's PCG64 generator, so a fixed seed reproduces the edge set
    bit for bit.
    """
    if cfg.p_in > 1 or cfg.p_out > 1:
        raise ValueError("expected degrees not attainable at this community size")
    rng = np.random.default_rng(cfg.seed)
    labels = np.repeat(np.arange(cfg.k), cfg.community_size)
    iu, ju = np.triu_indices(cfg.n, k=1)
    same = labels[iu] == labels[ju]
    prob = np.where(same, cfg.p_in, cfg.p_out)
    keep = rng.random(iu.size) < prob
    edges = frozenset(zip(iu[keep].tolist(), ju[keep].tolist()))
    return Graph(cfg.n, edges, dict(enumerate(labels.tolist())))
