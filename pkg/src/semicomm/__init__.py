"""Semi-supervised community detection with pairwise constraints."""

from .constraints import (
    ConstraintEncoder,
    ConstraintSet,
    encode_b,
    sample_random_constraints,
    sample_rule_based_constraints,
)
from .gn import GnConfig, generate_gn
from .graph import Graph, adjacency_a0, adjacency_a1, adjacency_complement, load_karate
from .kernels import DiffusionKernelSimilarity, diffusion_kernel, similarity_sk
from .metrics import matched_accuracy, modularity_q, nmi, select_k_by_q
from .models import SemiSupervisedCommunityDetector
from .nmf import NMFCommunityDetector
from .spectral import SpectralCommunityDetector

__all__ = [
    "ConstraintEncoder",
    "ConstraintSet",
    "DiffusionKernelSimilarity",
    "GnConfig",
    "Graph",
    "NMFCommunityDetector",
    "SemiSupervisedCommunityDetector",
    "SpectralCommunityDetector",
    "adjacency_a0",
    "adjacency_a1",
    "adjacency_complement",
    "diffusion_kernel",
    "encode_b",
    "generate_gn",
    "load_karate",
    "matched_accuracy",
    "modularity_q",
    "nmi",
    "sample_random_constraints",
    "sample_rule_based_constraints",
    "select_k_by_q",
    "similarity_sk",
]
