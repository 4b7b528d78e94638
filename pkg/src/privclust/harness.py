"""Benchmark orchestration: run a method matrix over seeded repetitions, score
against truth, and assemble per-method reports plus a combined comparison with
pairwise Wilcoxon tests."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .clusterers import ClustererConfig, em_gmm, kmeans, som, som2k, spectral
from .consensus import ConsensusConfig, arimax
from .datagen import PairedDataset
from .io import ExperimentReport, summarize
from .numerics import as_matrix, concat_features, minmax_normalize, pca_fit, pca_transform
from .pdot import PdotConfig, pdot, pdot_em
from .seeding import derive_seed
from .stats import ALTERNATIVES, wilcoxon_signed_rank
from .validity import adjusted_rand, nmi

METHOD_NAMES = (
    "kmeans-X",
    "kmeans-XplusXp",
    "arimax",
    "pdot",
    "pdot-em",
    "em",
    "spectral",
    "som",
    "som2k",
)

SIGNIFICANCE = 0.05


@dataclass
class ExperimentPlan:
    methods: list
    repetitions: int = 100
    k: int = 2
    seed: int = 0
    normalize: bool = True
    pca: int | None = None
    consensus_runs: int = 100
    dataset_id: str = ""

    def snapshot(self) -> dict:
        return {
            "methods": list(self.methods),
            "repetitions": self.repetitions,
            "k": self.k,
            "seed": self.seed,
            "normalize": self.normalize,
            "pca": self.pca,
            "consensus_runs": self.consensus_runs,
            "dataset_id": self.dataset_id,
        }


def _views(plan: ExperimentPlan, data: PairedDataset) -> dict:
    tech = as_matrix(data.tech, "tech")
    priv = as_matrix(data.priv, "priv")
    tech_n = minmax_normalize(tech) if plan.normalize else tech
    priv_n = minmax_normalize(priv) if plan.normalize else priv
    fused = concat_features(tech_n, priv_n)
    if plan.pca:
        tech_view = pca_transform(pca_fit(tech_n, plan.pca), tech_n)
        fused_view = pca_transform(pca_fit(fused, plan.pca), fused)
    else:
        tech_view, fused_view = tech_n, fused
    return {
        "tech_raw": tech,
        "priv_raw": priv,
        "tech_view": tech_view,
        "priv_view": priv_n,
        "fused_view": fused_view,
    }


def _run_method(method: str, views: dict, plan: ExperimentPlan, rep_seed: int) -> np.ndarray:
    cfg = ClustererConfig(k=plan.k, seed=rep_seed)
    if method == "kmeans-X":
        return kmeans(views["tech_view"], cfg).labels
    if method == "kmeans-XplusXp":
        return kmeans(views["fused_view"], cfg).labels
    if method == "em":
        return em_gmm(views["fused_view"], cfg).labels
    if method == "spectral":
        return spectral(views["fused_view"], cfg).labels
    if method == "som":
        return som(views["fused_view"], cfg).labels
    if method == "som2k":
        return som2k(views["fused_view"], cfg).labels
    if method == "arimax":
        ccfg = ConsensusConfig(
            tech=ClustererConfig(k=plan.k),
            priv=ClustererConfig(k=plan.k),
            runs=plan.consensus_runs,
            seed=rep_seed,
        )
        return arimax(views["tech_view"], views["priv_view"], ccfg)[0].labels
    if method in ("pdot", "pdot-em"):
        pcfg = PdotConfig(
            base=ClustererConfig(k=plan.k),
            iters=plan.consensus_runs,
            seed=rep_seed,
            pca_components=plan.pca,
        )
        runner = pdot if method == "pdot" else pdot_em
        return runner(views["tech_raw"], views["priv_raw"], pcfg)[0].labels
    raise ValueError(f"unknown method '{method}'; available: {', '.join(METHOD_NAMES)}")


def run_plan(plan: ExperimentPlan, data: PairedDataset):
    """Execute every (method x repetition) cell and return (reports, combined).

    Per-repetition seeds derive from (master seed, method, repetition), so
    adding a method never perturbs another method's runs.
    """
    if not plan.methods:
        raise ValueError("plan needs at least one method")
    unknown = [m for m in plan.methods if m not in METHOD_NAMES]
    if unknown:
        raise ValueError(f"unknown method(s) {unknown}; available: {', '.join(METHOD_NAMES)}")
    if len(set(plan.methods)) != len(plan.methods):
        raise ValueError("duplicate method names in plan")
    if plan.repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    views = _views(plan, data)
    truth = data.truth

    reports = {}
    for method in plan.methods:
        runs = []
        for rep in range(plan.repetitions):
            rep_seed = derive_seed(plan.seed, method, rep)
            labels = _run_method(method, views, plan, rep_seed)
            entry = {"rep": rep, "seed": rep_seed, "ari": None, "nmi": None}
            if truth is not None:
                entry["ari"] = float(adjusted_rand(labels, truth))
                entry["nmi"] = float(nmi(labels, truth))
            runs.append(entry)
        summary = {}
        if truth is not None:
            summary = {
                "ari": summarize([r["ari"] for r in runs]),
                "nmi": summarize([r["nmi"] for r in runs]),
            }
        reports[method] = ExperimentReport(
            method=method,
            dataset_id=plan.dataset_id,
            runs=runs,
            summary=summary,
            config=plan.snapshot(),
        )

    combined = {
        "dataset_id": plan.dataset_id,
        "config": plan.snapshot(),
        "methods": {m: reports[m].summary for m in plan.methods},
        "wilcoxon": pairwise_tests(reports, plan.methods) if truth is not None else [],
    }
    return reports, combined


def pairwise_tests(reports: dict, methods, metric: str = "nmi") -> list:
    """Three-hypothesis Wilcoxon comparison (two-sided plus both one-sided) for
    every method pair at the 0.05 level; degenerate pairs are recorded, not raised."""
    rows = []
    for a, b in combinations(methods, 2):
        xs = [r[metric] for r in reports[a].runs]
        ys = [r[metric] for r in reports[b].runs]
        row = {"a": a, "b": b, "metric": metric}
        try:
            tests = {}
            for alt in ALTERNATIVES:
                res = wilcoxon_signed_rank(xs, ys, alternative=alt)
                tests[alt] = {
                    "statistic": res.statistic,
                    "p_value": res.p_value,
                    "reject": bool(res.p_value < SIGNIFICANCE),
                    "method": res.method,
                }
            row["tests"] = tests
        except ValueError as exc:
            row["degenerate"] = str(exc)
        rows.append(row)
    return rows
