import json

import numpy as np
import pytest

from privclust.clusterers import ClustererConfig, kmeans
from privclust.datagen import (
    PRESET_ENV,
    SyntheticConfig,
    gen_gaussian_privileged,
    gen_pointwise_privileged,
    gen_technical,
    list_presets,
    load_preset,
    make_paired,
)
from privclust.numerics import minmax_normalize
from privclust.validity import adjusted_rand


def small_config(sigma_tech=0.3, sigma_priv=0.0, seed=1):
    return SyntheticConfig(
        blob_centers=np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]),
        blob_classes=np.array([0, 0, 1, 1]),
        per_blob=10,
        sigma_tech=sigma_tech,
        priv_centers=np.array([[0.1, 0.1], [0.2, 0.2]]),
        sigma_priv=sigma_priv,
        seed=seed,
    )


# ---- generators ----

def test_gen_technical_deterministic():
    cfg = small_config()
    x1, t1 = gen_technical(cfg)
    x2, t2 = gen_technical(cfg)
    assert np.array_equal(x1, x2)
    assert np.array_equal(t1, t2)


def test_gen_technical_zero_sigma_exact_centers():
    cfg = small_config(sigma_tech=0.0)
    x, truth = gen_technical(cfg)
    expected = np.repeat(cfg.blob_centers, cfg.per_blob, axis=0)
    assert np.array_equal(x, expected)


def test_gen_technical_class_counts():
    cfg = small_config()
    _, truth = gen_technical(cfg)
    assert (truth == 0).sum() == 20
    assert (truth == 1).sum() == 20


def test_gen_technical_validation():
    cfg = small_config()
    bad = SyntheticConfig(cfg.blob_centers[:1], cfg.blob_classes[:1], 10, 0.3, cfg.priv_centers, 0.0, 1)
    with pytest.raises(ValueError):
        gen_technical(bad)
    same_class = SyntheticConfig(cfg.blob_centers, np.zeros(4, dtype=int), 10, 0.3, cfg.priv_centers, 0.0, 1)
    with pytest.raises(ValueError):
        gen_technical(same_class)
    negative = SyntheticConfig(cfg.blob_centers, cfg.blob_classes, 10, -0.1, cfg.priv_centers, 0.0, 1)
    with pytest.raises(ValueError):
        gen_technical(negative)


def test_blob_means_converge_to_centers():
    cfg = SyntheticConfig(
        blob_centers=np.array([[0.0, 0.0], [5.0, 5.0]]),
        blob_classes=np.array([0, 1]),
        per_blob=10_000,
        sigma_tech=0.7,
        priv_centers=np.array([[0.0, 0.0], [1.0, 1.0]]),
        sigma_priv=0.0,
        seed=4,
    )
    x, truth = gen_technical(cfg)
    bound = 3 * cfg.sigma_tech / np.sqrt(cfg.per_blob)
    for blob, center in enumerate(cfg.blob_centers):
        mean = x[blob * cfg.per_blob : (blob + 1) * cfg.per_blob].mean(axis=0)
        assert np.abs(mean - center).max() < bound


def test_pointwise_rows_exact():
    truth = np.array([0, 1, 0, 1])
    centers = np.array([[0.1, 0.1], [0.5, 0.4]])
    xp = gen_pointwise_privileged(truth, centers)
    assert np.array_equal(xp[0], [0.1, 0.1])
    assert np.array_equal(xp[1], [0.5, 0.4])
    assert np.linalg.norm(centers[1] - centers[0]) == pytest.approx(0.5, abs=1e-12)


def test_pointwise_single_class_constant():
    xp = gen_pointwise_privileged(np.zeros(5, dtype=int), np.array([[0.1, 0.1], [0.2, 0.2]]))
    assert (xp == [0.1, 0.1]).all()


def test_pointwise_missing_center():
    with pytest.raises(ValueError, match="no privileged center"):
        gen_pointwise_privileged([0, 2], np.array([[0.0, 0.0], [1.0, 1.0]]))


def test_gaussian_privileged_zero_sigma_is_pointwise():
    truth = np.array([0, 1, 1, 0])
    centers = np.array([[0.1, 0.1], [0.2, 0.2]])
    assert np.array_equal(
        gen_gaussian_privileged(truth, centers, 0.0, seed=9),
        gen_pointwise_privileged(truth, centers),
    )


def test_gaussian_privileged_negative_sigma():
    with pytest.raises(ValueError):
        gen_gaussian_privileged([0, 1], np.array([[0.0, 0.0], [1.0, 1.0]]), -0.5, seed=0)


def test_make_paired_alignment():
    data = make_paired(small_config(sigma_priv=0.05))
    assert data.tech.shape[0] == data.priv.shape[0] == len(data.truth)


# ---- presets ----

def test_bundled_presets_load():
    names = list_presets()
    assert {"pointwise-d02", "pointwise-d05", "gaussian-d02", "gaussian-d05"} <= set(names)
    for name in names:
        cfg = load_preset(name)
        assert cfg.per_blob >= 1
        data = make_paired(cfg)
        assert data.tech.shape[0] == 100


def test_preset_separations():
    assert load_preset("pointwise-d05").class_separation() == pytest.approx(0.5, abs=1e-12)
    assert load_preset("pointwise-d02").class_separation() == pytest.approx(np.sqrt(0.02), abs=1e-12)


def test_unknown_preset_lists_available():
    with pytest.raises(ValueError, match="available presets"):
        load_preset("nonexistent")


def test_preset_dir_override(tmp_path, monkeypatch):
    payload = {
        "name": "custom",
        "blob_centers": [[0.0, 0.0], [1.0, 1.0]],
        "blob_classes": [0, 1],
        "per_blob": 5,
        "sigma_tech": 0.1,
        "priv_centers": [[0.0, 0.0], [1.0, 0.0]],
        "sigma_priv": 0.0,
        "seed": 3,
    }
    (tmp_path / "custom.json").write_text(json.dumps(payload))
    monkeypatch.setenv(PRESET_ENV, str(tmp_path))
    assert list_presets() == ["custom"]
    cfg = load_preset("custom")
    assert cfg.per_blob == 5
    with pytest.raises(ValueError):
        load_preset("gaussian-d02")


def test_preset_missing_field(tmp_path):
    (tmp_path / "broken.json").write_text(json.dumps({"name": "broken"}))
    with pytest.raises(ValueError, match="missing field"):
        load_preset(str(tmp_path / "broken.json"))


# ---- calibration bands (frozen by the preset files) ----

def test_kmeans_instability_profile_on_preset():
    data = make_paired(load_preset("gaussian-d02"))
    aris = []
    partitions = set()
    for r in range(100):
        res = kmeans(data.tech, ClustererConfig(k=2, seed=r))
        aris.append(adjusted_rand(res.labels, data.truth))
        partitions.add(res.labels.tobytes())
    assert len(partitions) >= 2
    assert 0.52 <= max(aris) <= 0.72


def test_solo_privileged_band_d02():
    data = make_paired(load_preset("gaussian-d02"))
    priv_n = minmax_normalize(data.priv)
    vals = [adjusted_rand(kmeans(priv_n, ClustererConfig(k=2, seed=r)).labels, data.truth) for r in range(100)]
    assert 0.62 <= np.mean(vals) <= 0.66


def test_solo_privileged_band_d05():
    data = make_paired(load_preset("gaussian-d05"))
    priv_n = minmax_normalize(data.priv)
    vals = [adjusted_rand(kmeans(priv_n, ClustererConfig(k=2, seed=r)).labels, data.truth) for r in range(100)]
    assert 0.75 <= np.mean(vals) <= 0.85
