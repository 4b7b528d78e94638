import numpy as np
import pytest

from conftest import two_blobs
from privclust.clusterers import ClustererConfig, ClusteringResult
from privclust.pdot import PdotConfig, align_labels, fuse_consensus_attributes, pdot, pdot_em, rd_ratio
from privclust.validity import nmi


def fake_result(labels, centroids=None):
    labels = np.asarray(labels, dtype=np.int64)
    k = labels.max() + 1
    if centroids is None:
        centroids = np.zeros((k, 2))
    return ClusteringResult(labels=labels, centroids=np.asarray(centroids, float),
                            objective=0.0, seed=0, iterations=1)


def pcfg(iters=8, seed=0, **kw):
    return PdotConfig(base=ClustererConfig(k=2), iters=iters, seed=seed, **kw)


# ---- rd_ratio ----

def test_rd_ratio_midpoint_is_one():
    a = np.array([0.0, 0.0])
    b = np.array([2.0, 2.0])
    x = (a + b) / 2 + np.array([-1.0, 1.0])  # on the perpendicular bisector
    assert rd_ratio(x, a, b) == pytest.approx(1.0, abs=1e-12)


def test_rd_ratio_at_assigned_centroid_is_zero():
    assert rd_ratio([1.0, 2.0], [1.0, 2.0], [5.0, 6.0]) == 0.0


def test_rd_ratio_worked_example():
    assert rd_ratio([1.0, 5.0], [0.0, 0.0], [4.0, 0.0]) == pytest.approx(1 / 3, abs=1e-12)


def test_rd_ratio_degenerate_centroids():
    with pytest.raises(ValueError):
        rd_ratio([1.0, 1.0], [2.0, 2.0], [2.0, 2.0])


def test_rd_ratio_infinite_at_opposing_centroid():
    assert rd_ratio([4.0, 7.0], [0.0, 0.0], [4.0, 0.0]) == np.inf


def test_rd_ratio_reciprocity(rng):
    for _ in range(300):
        d = int(rng.integers(2, 5))
        x, a, b = rng.normal(size=(3, d))
        if np.allclose(a, b):
            continue
        fwd = rd_ratio(x, a, b)
        rev = rd_ratio(x, b, a)
        if np.isfinite(fwd) and np.isfinite(rev) and fwd > 0 and rev > 0:
            assert fwd * rev == pytest.approx(1.0, abs=1e-9)


def test_rd_ratio_below_one_means_closer_to_assigned(rng):
    for _ in range(100):
        x, a, b = rng.normal(size=(3, 3))
        if np.allclose(a, b):
            continue
        ratio = rd_ratio(x, a, b)
        if not np.isfinite(ratio):
            continue
        z = x  # projection preserved ordering is what the ratio encodes
        closer = np.linalg.norm  # readability only
        assert (ratio < 1) == (
            closer(_project(x, a, b) - a) < closer(_project(x, a, b) - b)
        )


def _project(x, a, b):
    from privclust.numerics import project_onto_line

    return project_onto_line(x, a, b)


# ---- align_labels ----

def test_align_identical_no_differences():
    t = fake_result([0, 0, 1, 1])
    p = fake_result([0, 0, 1, 1])
    pair = align_labels(t, p)
    assert pair.differences.size == 0
    assert pair.mapping.tolist() == [0, 1]


def test_align_complement_maps_by_swap():
    t = fake_result([0, 0, 1, 1])
    p = fake_result([1, 1, 0, 0])
    pair = align_labels(t, p)
    assert pair.mapping.tolist() == [1, 0]
    assert pair.differences.size == 0


def test_align_worked_example():
    t = fake_result([0, 0, 1, 1])
    p = fake_result([0, 1, 1, 1])
    pair = align_labels(t, p)
    assert pair.mapping.tolist() == [0, 1]
    assert pair.differences.tolist() == [1]
    assert sorted(pair.matches.tolist()) == [0, 2, 3]


def test_align_differences_at_most_half(rng):
    for _ in range(100):
        n = int(rng.integers(2, 40))
        t = fake_result(np.r_[0, 1, rng.integers(0, 2, n)])
        p = fake_result(np.r_[0, 1, rng.integers(0, 2, n)])
        pair = align_labels(t, p)
        assert pair.differences.size <= (n + 2) / 2
        assert pair.differences.size + pair.matches.size == n + 2
        assert not np.intersect1d(pair.differences, pair.matches).size


def test_align_rejects_other_k():
    t = fake_result([0, 1, 2], centroids=np.zeros((3, 2)))
    p = fake_result([0, 1, 0])
    with pytest.raises(ValueError, match="k = 2"):
        align_labels(t, p)


# ---- fuse_consensus_attributes ----

def test_fuse_appends_indicator_columns():
    out = fuse_consensus_attributes(np.array([[0.3], [0.9]]), [0, 1], 2)
    assert out.shape == (2, 3)
    assert out[:, 1:].tolist() == [[1.0, 0.0], [0.0, 1.0]]


def test_fuse_degenerate_single_cluster():
    out = fuse_consensus_attributes(np.zeros((3, 2)), [0, 0, 0], 2)
    assert out[:, 3].tolist() == [0.0, 0.0, 0.0]


def test_fuse_rows_sum_to_one(rng):
    labels = rng.integers(0, 2, 50)
    out = fuse_consensus_attributes(rng.uniform(size=(50, 4)), labels, 2)
    assert out[:, 4:].sum(axis=1).tolist() == [1.0] * 50


def test_fuse_validation():
    with pytest.raises(ValueError):
        fuse_consensus_attributes(np.zeros((3, 2)), [0, 1], 2)
    with pytest.raises(ValueError):
        fuse_consensus_attributes(np.zeros((2, 2)), [0, 3], 2)


# ---- pdot ----

def test_pdot_gate_closed_on_self_consensus():
    X, _ = two_blobs(sigma=1.0)
    res, trace = pdot(X, X, pcfg(mirror_streams=True))
    assert trace.gate_fired is False
    assert trace.best_nmi == pytest.approx(1.0, abs=1e-12)
    assert trace.swap_count == 0


def test_pdot_gate_closed_returns_best_technical_unchanged():
    X, _ = two_blobs(sigma=1.0)
    res, trace = pdot(X, X, pcfg(mirror_streams=True))
    res2, trace2 = pdot(X, X, pcfg(mirror_streams=True))
    assert np.array_equal(res.labels, res2.labels)
    assert res.seed == res2.seed  # the selected technical run itself


def test_pdot_pointwise_recovers_truth(pointwise_d02):
    res, trace = pdot(pointwise_d02.tech, pointwise_d02.priv, pcfg(iters=20, seed=3))
    assert trace.gate_fired
    assert nmi(res.labels, pointwise_d02.truth) >= 0.99


def test_pdot_swaps_only_within_disagreement_set(gaussian_d02):
    res, trace = pdot(gaussian_d02.tech, gaussian_d02.priv, pcfg(iters=20, seed=1, record_ratios=True))
    if trace.gate_fired:
        assert trace.swap_count <= trace.n_differences
        assert len(trace.ratios) == trace.n_differences
        recorded = {i for i, _, _ in trace.ratios}
        assert set(trace.swapped) <= recorded


def test_pdot_trace_serializable(gaussian_d02):
    res, trace = pdot(gaussian_d02.tech, gaussian_d02.priv, pcfg(iters=10, seed=2, record_ratios=True))
    info = trace.to_dict(verbose=True)
    assert {"gate_fired", "literal_gate", "swap_count", "best_nmi"} <= set(info)
    if trace.gate_fired:
        assert info["n_matches"] + info["n_differences"] == gaussian_d02.tech.shape[0]


def test_pdot_validation_errors(gaussian_d02):
    with pytest.raises(ValueError, match="row-count"):
        pdot(np.ones((4, 2)), np.ones((5, 2)), pcfg())
    with pytest.raises(ValueError, match="k = 2"):
        pdot(gaussian_d02.tech, gaussian_d02.priv, PdotConfig(base=ClustererConfig(k=3), iters=2))
    with pytest.raises(ValueError):
        pdot(gaussian_d02.tech, gaussian_d02.priv, pcfg(iters=0))


def test_pdot_deterministic(gaussian_d02):
    a, _ = pdot(gaussian_d02.tech, gaussian_d02.priv, pcfg(iters=15, seed=8))
    b, _ = pdot(gaussian_d02.tech, gaussian_d02.priv, pcfg(iters=15, seed=8))
    assert np.array_equal(a.labels, b.labels)


def test_pdot_pca_pre_step(gaussian_d02):
    res, trace = pdot(gaussian_d02.tech, gaussian_d02.priv, pcfg(iters=10, seed=4, pca_components=2))
    assert trace.used_pca
    assert len(res.labels) == gaussian_d02.tech.shape[0]


def test_pdot_em_gate_closed_matches_pdot():
    X, _ = two_blobs(sigma=1.0)
    a, ta = pdot(X, X, pcfg(mirror_streams=True))
    b, tb = pdot_em(X, X, pcfg(mirror_streams=True))
    assert tb.gate_fired is False
    assert np.array_equal(a.labels, b.labels)


def test_pdot_em_runs_on_preset(pointwise_d02):
    res, trace = pdot_em(pointwise_d02.tech, pointwise_d02.priv, pcfg(iters=10, seed=6))
    assert nmi(res.labels, pointwise_d02.truth) >= 0.99
