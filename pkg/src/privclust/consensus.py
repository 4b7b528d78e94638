"""Consensus selection: pick the technical clustering that best agrees with privileged clusterings."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .clusterers import ClustererConfig, ClusteringResult, run_clusterer
from .numerics import as_matrix
from .seeding import derive_seed
from .validity import adjusted_rand, nmi


@dataclass
class ConsensusConfig:
    """Repeated-run configuration; the two views may use different clusterer settings."""

    tech: ClustererConfig
    priv: ClustererConfig
    runs: int = 100
    seed: int = 0
    algorithm: str = "kmeans"


@dataclass
class ConsensusTrace:
    tech_results: list = field(repr=False)
    priv_results: list = field(repr=False)
    agreement: np.ndarray = field(repr=False)
    best_tech: int = 0
    best_priv: int = 0
    best_score: float = 0.0

    def to_dict(self, include_runs: bool = False) -> dict:
        out = {
            "runs": len(self.tech_results),
            "best_tech": int(self.best_tech),
            "best_priv": int(self.best_priv),
            "best_score": float(self.best_score),
            "agreement_max": float(self.agreement.max()),
            "agreement_mean": float(self.agreement.mean()),
        }
        if include_runs:
            out["tech_labels"] = [r.labels.tolist() for r in self.tech_results]
            out["priv_labels"] = [r.labels.tolist() for r in self.priv_results]
            out["agreement"] = self.agreement.tolist()
        return out


def _pairwise_scores(tech_results, priv_results, metric) -> np.ndarray:
    """Score every (tech, priv) pair, deduplicating identical canonical partitions."""

    def dedupe(results):
        ids = {}
        inverse = []
        reps = []
        for r in results:
            key = r.labels.tobytes()
            if key not in ids:
                ids[key] = len(reps)
                reps.append(r.labels)
            inverse.append(ids[key])
        return reps, np.array(inverse)

    reps_t, inv_t = dedupe(tech_results)
    reps_p, inv_p = dedupe(priv_results)
    compact = np.empty((len(reps_t), len(reps_p)))
    for i, lt in enumerate(reps_t):
        for j, lp in enumerate(reps_p):
            compact[i, j] = metric(lt, lp)
    return compact[inv_t][:, inv_p]


class BestPair(NamedTuple):
    tech_index: int
    priv_index: int
    score: float
    tech: ClusteringResult
    priv: ClusteringResult


def best_by_nmi(tech_results, priv_results) -> BestPair:
    """Argmax of NMI over all (tech, priv) result pairs; ties go to the lexicographically lowest pair."""
    if not tech_results or not priv_results:
        raise ValueError("best_by_nmi: result lists must be non-empty")
    scores = _pairwise_scores(tech_results, priv_results, nmi)
    flat = int(np.argmax(scores))
    i, j = divmod(flat, scores.shape[1])
    return BestPair(i, j, float(scores[i, j]), tech_results[i], priv_results[j])


def arimax(tech_data, priv_data, cfg: ConsensusConfig):
    """Run `runs` clusterings of each view and return the technical clustering
    with maximal adjusted-Rand agreement against any privileged clustering.

    The selected result is one of the generated technical clusterings,
    unmodified. Returns (selected result, trace); the trace carries the full
    runs x runs agreement matrix.
    """
    tech = as_matrix(tech_data, "tech")
    priv = as_matrix(priv_data, "priv")
    if tech.shape[0] != priv.shape[0]:
        raise ValueError(f"row-count mismatch: tech has {tech.shape[0]}, priv has {priv.shape[0]}")
    if cfg.runs < 1:
        raise ValueError("runs must be >= 1")
    tech_results = [
        run_clusterer(cfg.algorithm, tech, replace(cfg.tech, seed=derive_seed(cfg.seed, "tech", r)))
        for r in range(cfg.runs)
    ]
    priv_results = [
        run_clusterer(cfg.algorithm, priv, replace(cfg.priv, seed=derive_seed(cfg.seed, "priv", r)))
        for r in range(cfg.runs)
    ]
    agreement = _pairwise_scores(tech_results, priv_results, adjusted_rand)
    flat = int(np.argmax(agreement))
    i, j = divmod(flat, cfg.runs)
    trace = ConsensusTrace(
        tech_results=tech_results,
        priv_results=priv_results,
        agreement=agreement,
        best_tech=i,
        best_priv=j,
        best_score=float(agreement[i, j]),
    )
    return tech_results[i], trace
