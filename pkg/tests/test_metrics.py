import math
from collections import Counter
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graph_helpers import random_graph, two_cliques
from semicomm.graph import Graph
from semicomm.metrics import (
    ContingencyTable,
    best_label_map,
    matched_accuracy,
    modularity_q,
    nmi,
    select_k_by_q,
)
from semicomm.models import detect
from semicomm.graph import adjacency_a1


def nmi_oracle(truth, computed):
    """NMI from entropies and mutual information of the empirical joint law."""
    n = len(truth)
    pa, pb = Counter(truth), Counter(computed)
    pab = Counter(zip(truth, computed))
    mi = sum(c / n * math.log((c / n) / (pa[a] / n * pb[b] / n)) for (a, b), c in pab.items())
    ha = -sum(c / n * math.log(c / n) for c in pa.values())
    hb = -sum(c / n * math.log(c / n) for c in pb.values())
    if ha == 0 or hb == 0:
        return 1.0 if ha == hb == 0 else 0.0
    return mi / math.sqrt(ha * hb)


def modularity_oracle(g, labels):
    """Double loop over ordered node pairs, straight from the definition."""
    a = np.zeros((g.n, g.n))
    for u, v in g.edges:
        a[u, v] = a[v, u] = 1
    total = sum(a[i, j] for i in range(g.n) for j in range(g.n) if i != j)
    q = 0.0
    for c in set(labels):
        members = [i for i in range(g.n) if labels[i] == c]
        inner = sum(a[i, j] for i in members for j in members if i != j)
        attached = sum(a[i, j] for i in members for j in range(g.n) if i != j)
        q += inner / total - (attached / total) ** 2
    return q


def accuracy_oracle(truth, computed):
    ts, cs = sorted(set(truth)), sorted(set(computed))
    best = 0
    if len(cs) <= len(ts):
        for image in permutations(ts, len(cs)):
            m = dict(zip(cs, image))
            best = max(best, sum(m[c] == t for t, c in zip(truth, computed)))
    else:
        for image in permutations(cs, len(ts)):
            m = dict(zip(image, ts))
            best = max(best, sum(m.get(c) == t for t, c in zip(truth, computed)))
    return best / len(truth)


def test_nmi_toy_masked_cluster():
    assert nmi([1, 1, 1, 2], [1, 1, 1, 1]) == 0.0


def test_nmi_toy_split():
    assert nmi([1, 1, 1, 2], [1, 1, 2, 2]) == pytest.approx(0.3456, abs=5e-5)


def test_nmi_perfect():
    assert nmi([0, 0, 1, 2, 2], [0, 0, 1, 2, 2]) == pytest.approx(1.0, abs=1e-12)
    assert nmi([5, 5, 5], [1, 1, 1]) == 1.0


def test_nmi_errors():
    with pytest.raises(ValueError):
        nmi([0, 1], [0, 1, 1])
    with pytest.raises(ValueError):
        nmi({0: 1, 1: 2}, {0: 1, 2: 2})


def test_contingency_table():
    t = ContingencyTable.from_labels([1, 1, 1, 2], [1, 1, 2, 2])
    assert t.counts.tolist() == [[2, 1], [0, 1]]
    assert t.n == 4 and t.row_sums.tolist() == [3, 1] and t.col_sums.tolist() == [2, 2]


labelings = st.integers(2, 8).flatmap(
    lambda n: st.tuples(st.lists(st.integers(0, 2), min_size=n, max_size=n),
                        st.lists(st.integers(0, 2), min_size=n, max_size=n))
)


@given(labelings)
@settings(max_examples=200, deadline=None)
def test_nmi_properties_and_oracle(pair):
    a, b = pair
    v = nmi(a, b)
    assert v == pytest.approx(nmi_oracle(a, b), abs=1e-12)
    assert v == pytest.approx(nmi(b, a), abs=1e-12)
    assert -1e-12 <= v <= 1 + 1e-12
    renamed = [{0: 7, 1: 3, 2: 9}[x] for x in a]
    assert nmi(renamed, b) == pytest.approx(v, abs=1e-12)
    if len(set(a)) >= 2:
        assert nmi(a, a) == pytest.approx(1.0, abs=1e-12)


@given(labelings)
@settings(max_examples=200, deadline=None)
def test_accuracy_oracle_and_naive_bound(pair):
    a, b = pair
    acc = matched_accuracy(a, b)
    assert acc == pytest.approx(accuracy_oracle(a, b), abs=1e-12)
    assert acc >= np.mean(np.array(a) == np.array(b)) - 1e-12


def test_accuracy_toys():
    assert matched_accuracy([1, 1, 1, 2], [1, 1, 2, 2]) == 0.75
    assert matched_accuracy([1, 1, 1, 2], [1, 1, 1, 1]) == 0.75
    assert matched_accuracy([0, 1, 2], [2, 0, 1]) == 1.0


def test_best_label_map():
    assert best_label_map([0, 0, 1, 1], [5, 5, 3, 3]) == {5: 0, 3: 1}


def test_modularity_two_triangles():
    g = two_cliques(3, 3)
    assert modularity_q(g, [0, 0, 0, 1, 1, 1]) == pytest.approx(0.5, abs=1e-12)
    assert modularity_q(g, [0] * 6) == 0.0


def test_modularity_requires_edges():
    with pytest.raises(ValueError):
        modularity_q(Graph(3), [0, 0, 1])


@given(st.integers(0, 10_000), st.integers(3, 8))
@settings(max_examples=60, deadline=None)
def test_modularity_oracle(seed, n):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n, 0.5)
    if g.n_edges == 0:
        return
    labels = rng.integers(0, 3, n).tolist()
    q = modularity_q(g, labels)
    assert q == pytest.approx(modularity_oracle(g, labels), abs=1e-12)
    renamed = [(x + 1) % 3 for x in labels]
    assert modularity_q(g, renamed) == pytest.approx(q, abs=1e-12)


def test_singletons_worse_than_planted():
    g = two_cliques(4, 5)
    assert modularity_q(g, list(range(9))) < modularity_q(g, g.label_array())


def _spectral(g):
    a1 = adjacency_a1(g)
    return lambda graph, k, seed: detect("spectral", a1, k, seed)


def test_select_k_two_triangles():
    g = two_cliques(3, 3)
    k_best, table = select_k_by_q(g, _spectral(g), [1, 2, 3], trials=3, seed=0)
    assert k_best == 2
    assert table[1] == 0.0 and table[2] == pytest.approx(0.5)
    assert table[3] < 0.5


def test_select_k_single_candidate():
    g = two_cliques(3, 3)
    assert select_k_by_q(g, _spectral(g), [3], trials=2, seed=0)[0] == 3


def test_select_k_ties_go_to_smallest():
    g = two_cliques(3, 3)
    k_best, _ = select_k_by_q(g, lambda graph, k, s: np.zeros(6, int), [4, 2, 3], 1, 0)
    assert k_best == 2


def test_select_k_empty_range():
    with pytest.raises(ValueError):
        select_k_by_q(two_cliques(3, 3), None, [], 1, 0)
