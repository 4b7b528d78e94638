"""Dot-product fusion of a technical view with a privileged view (two-cluster setting).

Pipeline: NMI consensus over repeated clusterings of both views, per-instance
confidence comparison via projection distance ratios, label swapping on the
disagreement set, indicator-column binding, and a final re-clustering of the
augmented matrix. Restricted to k = 2; larger k is rejected rather than
guessed at.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .clusterers import ClustererConfig, ClusteringResult, run_clusterer
from .consensus import best_by_nmi
from .numerics import as_matrix, euclidean_distance, minmax_normalize, pca_fit, pca_transform, project_onto_line
from .seeding import derive_seed
from .validity import as_labels, entropy


@dataclass
class PdotConfig:
    base: ClustererConfig
    iters: int = 100  # consensus runs per view
    final_algorithm: str = "kmeans"  # "em" gives the EM-final variant
    algorithm: str = "kmeans"  # clusterer used for the consensus runs
    seed: int = 0
    pca_components: int | None = None  # reduce the technical view before consensus and binding
    mirror_streams: bool = False  # diagnostic: both views share one seed stream
    record_ratios: bool = False  # keep per-instance (tech, priv) ratios in the trace


@dataclass
class AlignedPair:
    """Two k=2 clusterings under the disagreement-minimizing label mapping."""

    tech: ClusteringResult
    priv: ClusteringResult
    mapping: np.ndarray  # tech-space id for each priv cluster id
    matches: np.ndarray
    differences: np.ndarray


@dataclass
class PdotTrace:
    best_tech_index: int
    best_priv_index: int
    best_nmi: float
    gate_fired: bool
    literal_gate: bool  # entropy-bound variant of the gate (best NMI < min of the two entropies), diagnostic only
    n_matches: int = 0
    n_differences: int = 0
    swap_count: int = 0
    swapped: list = field(default_factory=list)
    used_pca: bool = False
    ratios: list | None = None

    def to_dict(self, verbose: bool = False) -> dict:
        out = {
            "best_tech_index": int(self.best_tech_index),
            "best_priv_index": int(self.best_priv_index),
            "best_nmi": float(self.best_nmi),
            "gate_fired": bool(self.gate_fired),
            "literal_gate": bool(self.literal_gate),
            "n_matches": int(self.n_matches),
            "n_differences": int(self.n_differences),
            "swap_count": int(self.swap_count),
            "used_pca": bool(self.used_pca),
        }
        if verbose:
            out["swapped"] = [int(i) for i in self.swapped]
            if self.ratios is not None:
                out["ratios"] = [
                    {"index": int(i), "tech": float(rt), "priv": float(rp)} for i, rt, rp in self.ratios
                ]
        return out


def rd_ratio(x, assigned, other) -> float:
    """Confidence ratio ||Z - assigned|| / ||Z - other|| for the projection Z of x
    onto the line through the two centroids; lower means more confidently placed.

    Returns +inf when Z coincides with the opposing centroid.
    """
    z = project_onto_line(x, assigned, other)
    num = euclidean_distance(z, np.asarray(assigned, dtype=float))
    den = euclidean_distance(z, np.asarray(other, dtype=float))
    if den == 0.0:
        return float("inf")
    return num / den


def _ratio_or_inf(x, assigned, other) -> float:
    # Coincident centroids carry no placement information: treat as maximally unconfident.
    if np.array_equal(assigned, other):
        return float("inf")
    return rd_ratio(x, assigned, other)


def align_labels(tech: ClusteringResult, priv: ClusteringResult) -> AlignedPair:
    """Choose the k=2 label mapping (identity or swap) minimizing disagreements.

    Post-alignment |differences| <= |matches| always holds, so the
    disagreement set is the smaller working set.
    """
    if tech.k != 2 or priv.k != 2:
        raise ValueError(f"align_labels supports k = 2 only, got k={tech.k} and k={priv.k}")
    lt = tech.labels
    lp = priv.labels
    if len(lt) != len(lp):
        raise ValueError(f"length mismatch: {len(lt)} vs {len(lp)}")
    n = len(lt)
    disagree_identity = int((lt != lp).sum())
    if disagree_identity <= n - disagree_identity:
        mapping = np.array([0, 1], dtype=np.int64)
    else:
        mapping = np.array([1, 0], dtype=np.int64)
    mapped = mapping[lp]
    differences = np.flatnonzero(lt != mapped)
    matches = np.flatnonzero(lt == mapped)
    return AlignedPair(tech=tech, priv=priv, mapping=mapping, matches=matches, differences=differences)


def fuse_consensus_attributes(base, labels, k: int) -> np.ndarray:
    """Append k indicator columns: column j holds 1.0 where label == j, else 0.0."""
    X = as_matrix(base, "base")
    labels = as_labels(labels)
    if len(labels) != X.shape[0]:
        raise ValueError(f"length mismatch: {len(labels)} labels for {X.shape[0]} rows")
    if labels.min() < 0 or labels.max() >= k:
        raise ValueError(f"labels outside [0, {k})")
    indicators = np.zeros((X.shape[0], k))
    indicators[np.arange(X.shape[0]), labels] = 1.0
    return np.concatenate([X, indicators], axis=1)


def pdot(tech_data, priv_data, cfg: PdotConfig):
    """Fuse the privileged view into the technical clustering (k = 2).

    Consensus step: `iters` clusterings of each view, best pair by NMI. If the
    best pair is identical (up to relabeling) the gate stays closed and the
    best technical clustering is returned unchanged. Otherwise labels are
    aligned, each disagreeing instance keeps the side whose projection ratio
    marks it as more confidently placed, the amended labels are bound to the
    (normalized, optionally PCA-reduced) technical matrix as indicator
    columns, and the final clusterer runs on the augmented matrix.

    Returns (ClusteringResult, PdotTrace).
    """
    tech = as_matrix(tech_data, "tech")
    priv = as_matrix(priv_data, "priv")
    if tech.shape[0] != priv.shape[0]:
        raise ValueError(f"row-count mismatch: tech has {tech.shape[0]}, priv has {priv.shape[0]}")
    if cfg.base.k != 2:
        raise ValueError(f"pdot supports k = 2 only, got k={cfg.base.k}")
    if cfg.iters < 1:
        raise ValueError("iters must be >= 1")

    work = minmax_normalize(tech)
    used_pca = False
    if cfg.pca_components is not None:
        model = pca_fit(work, cfg.pca_components)
        work = pca_transform(model, work)
        used_pca = True
    priv_work = minmax_normalize(priv)

    tech_tag = "tech"
    priv_tag = "tech" if cfg.mirror_streams else "priv"
    tech_results = [
        run_clusterer(cfg.algorithm, work, replace(cfg.base, seed=derive_seed(cfg.seed, tech_tag, r)))
        for r in range(cfg.iters)
    ]
    priv_results = [
        run_clusterer(cfg.algorithm, priv_work, replace(cfg.base, seed=derive_seed(cfg.seed, priv_tag, r)))
        for r in range(cfg.iters)
    ]
    best = best_by_nmi(tech_results, priv_results)
    tech_best, priv_best = best.tech, best.priv

    literal_gate = best.score < min(entropy(tech_best.labels), entropy(priv_best.labels))
    if np.array_equal(tech_best.labels, priv_best.labels):
        trace = PdotTrace(
            best_tech_index=best.tech_index,
            best_priv_index=best.priv_index,
            best_nmi=best.score,
            gate_fired=False,
            literal_gate=literal_gate,
            used_pca=used_pca,
        )
        return tech_best, trace

    pair = align_labels(tech_best, priv_best)
    labels = tech_best.labels.copy()
    tc = tech_best.centroids
    pc = priv_best.centroids
    swapped: list = []
    ratios: list | None = [] if cfg.record_ratios else None
    for idx in pair.differences:
        lt = int(labels[idx])
        lp = int(priv_best.labels[idx])
        ratio_tech = _ratio_or_inf(work[idx], tc[lt], tc[1 - lt])
        ratio_priv = _ratio_or_inf(priv_work[idx], pc[lp], pc[1 - lp])
        if ratios is not None:
            ratios.append((int(idx), ratio_tech, ratio_priv))
        if ratio_tech > ratio_priv:
            labels[idx] = 1 - lt
            swapped.append(int(idx))

    bound = fuse_consensus_attributes(work, labels, 2)
    final_cfg = replace(cfg.base, seed=derive_seed(cfg.seed, "final"), init_centroids=None)
    final = run_clusterer(cfg.final_algorithm, bound, final_cfg)
    trace = PdotTrace(
        best_tech_index=best.tech_index,
        best_priv_index=best.priv_index,
        best_nmi=best.score,
        gate_fired=True,
        literal_gate=literal_gate,
        n_matches=len(pair.matches),
        n_differences=len(pair.differences),
        swap_count=len(swapped),
        swapped=swapped,
        used_pca=used_pca,
        ratios=ratios,
    )
    return final, trace


def pdot_em(tech_data, priv_data, cfg: PdotConfig):
    """The fusion pipeline with EM as the final clusterer."""
    return pdot(tech_data, priv_data, replace(cfg, final_algorithm="em"))
