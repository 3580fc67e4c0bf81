import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import make_pipeline

from graph_helpers import two_cliques
from semicomm import (
    ConstraintEncoder,
    DiffusionKernelSimilarity,
    NMFCommunityDetector,
    SemiSupervisedCommunityDetector,
    SpectralCommunityDetector,
)
from semicomm.graph import adjacency_a0, adjacency_a1, load_karate
from semicomm.metrics import nmi


@pytest.mark.parametrize("est", [
    NMFCommunityDetector(3, solver="kl", random_state=1),
    SpectralCommunityDetector(3, n_init=2, random_state=1),
    ConstraintEncoder(must_link=[(0, 1)], alpha=3.0),
    DiffusionKernelSimilarity(beta=0.5),
    SemiSupervisedCommunityDetector(SpectralCommunityDetector(2), alpha=1.0),
])
def test_get_params_and_clone(est):
    params = est.get_params()
    twin = clone(est)
    assert type(twin) is type(est)
    for key, value in twin.get_params(deep=False).items():
        if hasattr(value, "get_params"):
            assert value.get_params() == params[key].get_params()
        else:
            assert value == params[key]


def test_set_params():
    est = NMFCommunityDetector().set_params(n_communities=4, solver="snmf")
    assert est.n_communities == 4 and est.solver == "snmf"


def test_pipeline_encoder_then_detector():
    g = load_karate()
    y = g.label_array()
    ml = [(0, 1), (32, 33)]
    cl = [(0, 33)]
    pipe = make_pipeline(ConstraintEncoder(must_link=ml, cannot_link=cl),
                         NMFCommunityDetector(2, random_state=0))
    labels = pipe.fit_predict(adjacency_a1(g))
    assert labels.shape == (34,)
    assert labels[0] == labels[1] and labels[32] == labels[33]
    assert nmi(y, labels) > 0.5


def test_semisupervised_constraints_improve_karate():
    g = load_karate()
    y = g.label_array()
    rng = np.random.default_rng(0)
    pairs = [tuple(p) for p in rng.choice(34, size=(60, 2)) if p[0] != p[1]]
    ml = [p for p in pairs if y[p[0]] == y[p[1]]]
    cl = [p for p in pairs if y[p[0]] != y[p[1]]]
    base = SemiSupervisedCommunityDetector(NMFCommunityDetector(2, random_state=0))
    plain = base.fit(adjacency_a0(g)).labels_
    guided = clone(base).fit(adjacency_a0(g), must_link=ml, cannot_link=cl).labels_
    assert nmi(y, guided) >= nmi(y, plain)
    assert nmi(y, guided) == 1.0


def test_semisupervised_sk_objective():
    g = two_cliques(4, 4)
    est = SemiSupervisedCommunityDetector(SpectralCommunityDetector(2, random_state=0),
                                          objective="sk").fit(adjacency_a0(g))
    assert (est.objective_matrix_ >= 0).all()
    assert nmi(g.label_array(), est.labels_) == 1.0
    with pytest.raises(ValueError):
        est.fit(adjacency_a0(g), must_link=[(0, 1)])


def test_semisupervised_rejects_bad_input():
    with pytest.raises(ValueError):
        SemiSupervisedCommunityDetector(objective="x").fit(np.eye(3))
    with pytest.raises(ValueError):
        SemiSupervisedCommunityDetector().fit(np.array([[0, 1], [0, 0.0]]))
