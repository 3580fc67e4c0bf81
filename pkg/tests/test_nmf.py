import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semicomm.nmf import (
    NMFCommunityDetector,
    NmfConfig,
    assign_partition,
    kl_objective,
    kl_step,
    lse_step,
    nmf_kl,
    nmf_lse,
    snmf,
    snmf_step,
)


def _positive(rng, shape, lo=0.5, hi=1.5):
    return rng.uniform(lo, hi, shape)


def test_lse_fixed_point():
    rng = np.random.default_rng(0)
    f, g = _positive(rng, (8, 3)), _positive(rng, (6, 3))
    out = nmf_lse(f @ g.T, NmfConfig(3, iter=1, variant="lse"), init=(f, g))
    np.testing.assert_allclose(out.F, f, atol=1e-10)
    np.testing.assert_allclose(out.G, g, atol=1e-10)


def test_lse_rank_one_recovery():
    rng = np.random.default_rng(1)
    u, v = _positive(rng, 10), _positive(rng, 7)
    out = nmf_lse(np.outer(u, v), NmfConfig(1, seed=3))
    assert out.objective_trace[-1] < 1e-6


def test_lse_trace_nonincreasing():
    x = np.random.default_rng(2).random((50, 50))
    trace = nmf_lse(x, NmfConfig(4, seed=2)).objective_trace
    assert trace.shape == (100,)
    assert (np.diff(trace) <= 1e-10).all()


def test_kl_fixed_point():
    rng = np.random.default_rng(3)
    f, g = _positive(rng, (7, 2)), _positive(rng, (9, 2))
    out = nmf_kl(f @ g.T, NmfConfig(2, iter=1, variant="kl"), init=(f, g))
    np.testing.assert_allclose(out.F, f, atol=1e-10)
    np.testing.assert_allclose(out.G, g, atol=1e-10)


def test_kl_zero_row_contributes_reconstruction_only():
    rng = np.random.default_rng(4)
    f, g = _positive(rng, (4, 2)), _positive(rng, (5, 2))
    x = rng.random((4, 5))
    x[2] = 0.0
    y = f @ g.T
    full = kl_objective(x, f, g)
    rows = [np.sum(x[i] * np.log(x[i] / y[i]) - x[i] + y[i]) for i in (0, 1, 3)]
    assert full == pytest.approx(sum(rows) + y[2].sum(), rel=1e-12)


def test_kl_trace_nonincreasing():
    x = np.random.default_rng(5).random((30, 30))
    trace = nmf_kl(x, NmfConfig(3, seed=5, variant="kl")).objective_trace
    assert (np.diff(trace) <= 1e-10).all()


def test_snmf_fixed_point():
    rng = np.random.default_rng(6)
    g, s = _positive(rng, (8, 2)), _positive(rng, (2, 2))
    s = (s + s.T) / 2
    out = snmf(g @ s @ g.T, NmfConfig(2, iter=1, variant="snmf"), init=(g, s))
    np.testing.assert_allclose(out.G, g, atol=1e-10)
    np.testing.assert_allclose(out.S, s, atol=1e-10)


def test_snmf_two_blocks():
    x = np.kron(np.eye(2), np.ones((3, 3)))
    out = snmf(x, NmfConfig(2, seed=0, variant="snmf"))
    assert out.objective_trace[-1] < 1e-4
    labels = assign_partition(out.G)
    assert len(set(labels[:3])) == 1 and len(set(labels[3:])) == 1
    assert labels[0] != labels[3]


def test_snmf_trace_nonincreasing_random_symmetric():
    rng = np.random.default_rng(7)
    a = rng.random((20, 20))
    trace = snmf(a + a.T, NmfConfig(4, seed=7, variant="snmf")).objective_trace
    assert (np.diff(trace) <= 1e-8).all()


def test_snmf_rejects_asymmetric_and_nonsquare():
    with pytest.raises(ValueError):
        snmf(np.array([[1.0, 2.0], [0.0, 1.0]]), NmfConfig(1, variant="snmf"))
    with pytest.raises(ValueError):
        snmf(np.ones((2, 3)), NmfConfig(1, variant="snmf"))


@pytest.mark.parametrize("solver", [nmf_lse, nmf_kl])
def test_negative_input_rejected(solver):
    with pytest.raises(ValueError, match="negative"):
        solver(np.array([[1.0, -1.0], [0.0, 1.0]]), NmfConfig(1))


def test_config_validation():
    for bad in (dict(k=0), dict(k=2, iter=0), dict(k=2, epsilon=0), dict(k=2, variant="bayes")):
        with pytest.raises(ValueError):
            NmfConfig(**bad)


@given(st.integers(0, 10_000), st.sampled_from(["lse", "kl", "snmf"]))
@settings(max_examples=20, deadline=None)
def test_factors_stay_nonnegative(seed, variant):
    rng = np.random.default_rng(seed)
    a = rng.random((12, 12))
    a[rng.random((12, 12)) < 0.4] = 0.0
    x = a + a.T
    f, g, s = rng.random((12, 3)), rng.random((12, 3)), rng.random((3, 3))
    for _ in range(30):
        if variant == "lse":
            f, g = lse_step(x, f, g, 1e-9)
        elif variant == "kl":
            f, g = kl_step(x, f, g, 1e-9)
        else:
            g, s = snmf_step(x, g, s, 1e-9)
        assert (f >= 0).all() and (g >= 0).all() and (s >= 0).all()


def test_deterministic_per_seed():
    x = np.random.default_rng(8).random((15, 15))
    for variant, fn in (("lse", nmf_lse), ("kl", nmf_kl)):
        a = fn(x, NmfConfig(3, seed=11, variant=variant))
        b = fn(x, NmfConfig(3, seed=11, variant=variant))
        assert np.array_equal(a.F, b.F) and np.array_equal(a.G, b.G)
        assert np.array_equal(a.objective_trace, b.objective_trace)


def test_assign_partition_examples():
    assert assign_partition([[0.9, 0.1], [0.2, 0.8]]).tolist() == [0, 1]
    assert assign_partition([[0.5, 0.5]]).tolist() == [0]
    assert assign_partition(np.eye(3)).tolist() == [0, 1, 2]


@given(st.integers(0, 10_000), st.floats(1e-3, 1e3))
@settings(max_examples=30, deadline=None)
def test_assign_partition_scale_invariant(seed, c):
    g = np.random.default_rng(seed).random((10, 4))
    np.testing.assert_array_equal(assign_partition(g), assign_partition(c * g))


def test_estimator_api():
    x = np.kron(np.eye(2), np.ones((4, 4)))
    est = NMFCommunityDetector(2, solver="kl", random_state=0)
    labels = est.fit_predict(x)
    assert labels.shape == (8,)
    assert est.objective_trace_.shape == (100,)
    assert est.get_params()["solver"] == "kl"
    with pytest.raises(ValueError):
        NMFCommunityDetector(9).fit(x)
