"""Seeded generators for paired synthetic benchmarks: blob technical data plus an
aligned privileged view that is either point-wise (every class at one exact
location) or Gaussian around the class locations.

Bundled presets live in privclust/presets/*.json; the PRIVCLUST_PRESET_DIR
environment variable overrides the search directory. Preset names ending in
d02/d05 label the privileged-center configuration, not a measured distance;
the actual separation is exposed as SyntheticConfig.class_separation().
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .numerics import euclidean_distance
from .seeding import derive_seed
from .validity import as_labels

PRESET_ENV = "PRIVCLUST_PRESET_DIR"


@dataclass
class SyntheticConfig:
    blob_centers: np.ndarray  # (B, d) technical blob locations
    blob_classes: np.ndarray  # (B,) true class id per blob
    per_blob: int
    sigma_tech: float
    priv_centers: np.ndarray  # (n_classes, dp) privileged class locations
    sigma_priv: float  # 0 reduces to point-wise data
    seed: int = 0
    name: str = ""

    def class_separation(self) -> float:
        return euclidean_distance(self.priv_centers[0], self.priv_centers[1])


@dataclass
class PairedDataset:
    """Row-aligned technical and privileged matrices plus optional true labels."""

    tech: np.ndarray
    priv: np.ndarray
    truth: np.ndarray | None = None


def _standard_normals(rng, count: int) -> np.ndarray:
    # Box-Muller pairs drawn from the generator's uniform stream.
    half = (count + 1) // 2
    u1 = np.maximum(rng.random(half), np.finfo(float).tiny)
    u2 = rng.random(half)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    return np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])[:count]


def gen_technical(cfg: SyntheticConfig):
    """Isotropic Gaussian samples around each blob center; labels follow the blob's class id."""
    centers = np.asarray(cfg.blob_centers, dtype=float)
    classes = np.asarray(cfg.blob_classes, dtype=np.int64)
    if centers.ndim != 2 or len(centers) < 2:
        raise ValueError("need at least 2 blob centers")
    if classes.shape != (len(centers),):
        raise ValueError("blob_classes must assign one class per blob")
    if len(np.unique(classes)) < 2:
        raise ValueError("need at least 2 distinct classes")
    if cfg.per_blob < 1:
        raise ValueError("per_blob must be >= 1")
    if cfg.sigma_tech < 0:
        raise ValueError("sigma_tech must be >= 0")
    rng = np.random.default_rng(derive_seed(cfg.seed, "tech"))
    n = len(centers) * cfg.per_blob
    d = centers.shape[1]
    noise = _standard_normals(rng, n * d).reshape(n, d)
    data = np.repeat(centers, cfg.per_blob, axis=0) + cfg.sigma_tech * noise
    truth = np.repeat(classes, cfg.per_blob)
    return data, truth


def gen_pointwise_privileged(truth, centers) -> np.ndarray:
    """Row i is exactly the privileged location of instance i's class."""
    truth = as_labels(truth, "truth")
    centers = np.asarray(centers, dtype=float)
    if centers.ndim != 2:
        raise ValueError("centers must be a 2-D array with one row per class")
    if truth.min() < 0 or truth.max() >= len(centers):
        raise ValueError(f"class id {int(truth.max())} has no privileged center")
    return centers[truth].copy()


def gen_gaussian_privileged(truth, centers, sigma: float, seed: int) -> np.ndarray:
    """Isotropic Gaussian noise around each instance's class location; sigma=0 is point-wise."""
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    base = gen_pointwise_privileged(truth, centers)
    rng = np.random.default_rng(seed)
    noise = _standard_normals(rng, base.size).reshape(base.shape)
    return base + sigma * noise


def make_paired(cfg: SyntheticConfig) -> PairedDataset:
    """Generate the full aligned dataset described by a synthetic config."""
    tech, truth = gen_technical(cfg)
    priv = gen_gaussian_privileged(truth, cfg.priv_centers, cfg.sigma_priv, derive_seed(cfg.seed, "priv"))
    return PairedDataset(tech=tech, priv=priv, truth=truth)


def preset_dir() -> Path:
    env = os.environ.get(PRESET_ENV)
    if env:
        return Path(env)
    return Path(__file__).parent / "presets"


def list_presets() -> list:
    base = preset_dir()
    if not base.is_dir():
        return []
    return sorted(p.stem for p in base.glob("*.json"))


def load_preset(name: str) -> SyntheticConfig:
    """Load a preset config by bundled name or by path to a JSON file."""
    path = Path(name)
    if not (path.suffix == ".json" and path.is_file()):
        path = preset_dir() / f"{name}.json"
    if not path.is_file():
        available = ", ".join(list_presets()) or "(none)"
        raise ValueError(f"unknown preset '{name}'; available presets: {available}")
    data = json.loads(path.read_text(encoding="utf-8"))
    try:
        return SyntheticConfig(
            blob_centers=np.asarray(data["blob_centers"], dtype=float),
            blob_classes=np.asarray(data["blob_classes"], dtype=np.int64),
            per_blob=int(data["per_blob"]),
            sigma_tech=float(data["sigma_tech"]),
            priv_centers=np.asarray(data["priv_centers"], dtype=float),
            sigma_priv=float(data["sigma_priv"]),
            seed=int(data.get("seed", 0)),
            name=str(data.get("name", path.stem)),
        )
    except KeyError as exc:
        raise ValueError(f"preset '{path}' is missing field {exc}") from exc
