#!/usr/bin/env python3
"""Calibration search for the bundled synthetic presets.

The presets are data, not code: this script documents how their numbers were
chosen and can regenerate them without touching the library. It searches

  1. (sigma_tech, dataset seed) so that 100 seeded K-Means runs on the
     technical blobs show the intended instability profile: best ARI vs
     truth in [0.56, 0.68], NMI st.dev >= 0.12, several distinct local
     optima;
  2. sigma_priv for each privileged-center configuration so that 100 seeded
     K-Means runs on the privileged view alone score a mean ARI vs truth in
     the stated band (d02: [0.62, 0.66]; d05: [0.75, 0.85]);
  3. then verifies the downstream contract on the winner: consensus
     selection is invocation-stable (st.dev ~ 0), the fusion pipeline beats
     consensus selection by a clear margin on the Gaussian preset, and
     reaches ~1.0 NMI on the point-wise presets.

Run:  python3 scripts/calibrate_presets.py [--write]
`--write` rewrites src/privclust/presets/*.json with the winning values.
"""

import argparse
import json
import statistics
from pathlib import Path

import numpy as np

import privclust as pc
from privclust.clusterers import ClustererConfig
from privclust.consensus import ConsensusConfig, arimax
from privclust.datagen import SyntheticConfig, gen_gaussian_privileged, gen_technical
from privclust.pdot import PdotConfig, pdot
from privclust.seeding import derive_seed

BLOB_CENTERS = [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]
BLOB_CLASSES = [0, 0, 1, 1]
PER_BLOB = 25
PRIV_CENTERS = {"d02": [[0.1, 0.1], [0.2, 0.2]], "d05": [[0.1, 0.1], [0.5, 0.4]]}
SOLO_BANDS = {"d02": (0.62, 0.66), "d05": (0.75, 0.85)}
PRESET_DIR = Path(__file__).resolve().parent.parent / "src" / "privclust" / "presets"


def base_config(sigma_tech, seed, priv_key="d02", sigma_priv=0.0):
    return SyntheticConfig(
        blob_centers=np.array(BLOB_CENTERS),
        blob_classes=np.array(BLOB_CLASSES),
        per_blob=PER_BLOB,
        sigma_tech=sigma_tech,
        priv_centers=np.array(PRIV_CENTERS[priv_key]),
        sigma_priv=sigma_priv,
        seed=seed,
    )


def tech_profile(sigma_tech, seed, runs=100):
    """Instability statistics of plain K-Means on the raw technical view."""
    tech, truth = gen_technical(base_config(sigma_tech, seed))
    aris, nmis, partitions = [], [], set()
    for r in range(runs):
        res = pc.kmeans(tech, ClustererConfig(k=2, seed=r))
        aris.append(pc.adjusted_rand(res.labels, truth))
        nmis.append(pc.nmi(res.labels, truth))
        partitions.add(res.labels.tobytes())
    return max(aris), statistics.fmean(aris), statistics.stdev(nmis), len(partitions)


def solo_priv_mean_ari(seed, priv_key, sigma_priv, runs=100):
    """Mean ARI vs truth of K-Means on the normalized privileged view alone.

    Truth depends only on the blob layout, not sigma_tech, so any sigma works here.
    """
    _, truth = gen_technical(base_config(0.42, seed))
    priv = gen_gaussian_privileged(truth, np.array(PRIV_CENTERS[priv_key]), sigma_priv, derive_seed(seed, "priv"))
    priv_n = pc.minmax_normalize(priv)
    vals = [
        pc.adjusted_rand(pc.kmeans(priv_n, ClustererConfig(k=2, seed=r)).labels, truth)
        for r in range(runs)
    ]
    return statistics.fmean(vals)


def pipeline_check(sigma_tech, seed, sigma_priv):
    cfg = base_config(sigma_tech, seed, "d02", sigma_priv)
    tech, truth = gen_technical(cfg)
    priv = gen_gaussian_privileged(truth, cfg.priv_centers, sigma_priv, derive_seed(seed, "priv"))
    selected = []
    for inv in range(10):
        res, _ = arimax(
            tech, priv,
            ConsensusConfig(tech=ClustererConfig(k=2), priv=ClustererConfig(k=2), runs=100, seed=inv),
        )
        selected.append(pc.nmi(res.labels, truth))
    gauss = [
        pc.nmi(pdot(tech, priv, PdotConfig(base=ClustererConfig(k=2), iters=100, seed=r))[0].labels, truth)
        for r in range(20)
    ]
    pointwise = np.array(cfg.priv_centers)[truth]
    point = [
        pc.nmi(pdot(tech, pointwise, PdotConfig(base=ClustererConfig(k=2), iters=100, seed=r))[0].labels, truth)
        for r in range(20)
    ]
    # Baseline stability on the raw concatenated view: EM and SOM should be
    # near-deterministic here and SOM2K should trail the consensus selection.
    fused = pc.concat_features(tech, priv)
    em_scores = [pc.nmi(pc.em_gmm(fused, ClustererConfig(k=2, seed=r)).labels, truth) for r in range(12)]
    som_scores = [pc.nmi(pc.som(fused, ClustererConfig(k=2, seed=r)).labels, truth) for r in range(8)]
    som2k_scores = [pc.nmi(pc.som2k(fused, ClustererConfig(k=2, seed=r)).labels, truth) for r in range(8)]
    return {
        "arimax_sd": statistics.stdev(selected),
        "arimax_mean": statistics.fmean(selected),
        "pdot_gauss_mean": statistics.fmean(gauss),
        "pdot_point_min": min(point),
        "em_sd": statistics.stdev(em_scores),
        "som_sd": statistics.stdev(som_scores),
        "som2k_mean": statistics.fmean(som2k_scores),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--write", action="store_true", help="rewrite the bundled preset files")
    args = parser.parse_args()

    print("== stage 1: technical instability profile ==")
    candidates = []
    for sigma_tech in (0.38, 0.40, 0.42, 0.44):
        for seed in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
            best, mean, sd, parts = tech_profile(sigma_tech, seed)
            ok = 0.56 <= best <= 0.68 and sd >= 0.12 and parts >= 2
            if ok:
                candidates.append((sigma_tech, seed, best, sd))
                print(f"  sigma_tech={sigma_tech:.2f} seed={seed:3d}  best={best:.3f} mean={mean:.3f} "
                      f"nmi_sd={sd:.3f} optima={parts}  <- candidate")
    if not candidates:
        raise SystemExit("no (sigma_tech, seed) candidate found; widen the grid")

    print("== stage 2: privileged noise bands ==")
    choice = None
    for sigma_tech, seed, best, sd in candidates:
        sigmas = {}
        for key, (lo, hi) in SOLO_BANDS.items():
            grid = np.arange(0.040, 0.080, 0.002) if key == "d02" else np.arange(0.10, 0.24, 0.005)
            hit = next((s for s in grid if lo <= solo_priv_mean_ari(seed, key, round(float(s), 3)) <= hi), None)
            if hit is not None:
                sigmas[key] = round(float(hit), 3)
        if len(sigmas) != 2:
            continue
        print(f"  sigma_tech={sigma_tech} seed={seed}: sigma_priv d02={sigmas['d02']} d05={sigmas['d05']}")
        checks = pipeline_check(sigma_tech, seed, sigmas["d02"])
        print(f"    arimax sd={checks['arimax_sd']:.5f} mean={checks['arimax_mean']:.3f} "
              f"pdot_gauss={checks['pdot_gauss_mean']:.3f} pdot_point_min={checks['pdot_point_min']:.4f} "
              f"em_sd={checks['em_sd']:.4f} som_sd={checks['som_sd']:.4f} som2k={checks['som2k_mean']:.3f}")
        margin = checks["pdot_gauss_mean"] - checks["arimax_mean"]
        if (
            checks["arimax_sd"] <= 0.005
            and margin >= 0.15
            and checks["pdot_point_min"] >= 0.995
            and checks["em_sd"] <= 0.02
            and checks["som_sd"] <= 0.02
            and checks["som2k_mean"] < checks["arimax_mean"]
        ):
            choice = (sigma_tech, seed, sigmas, best, sd)
            break
    if choice is None:
        raise SystemExit("no candidate passed the pipeline checks")

    sigma_tech, seed, sigmas, best, sd = choice
    print(f"== winner: sigma_tech={sigma_tech} seed={seed} "
          f"sigma_priv(d02)={sigmas['d02']} sigma_priv(d05)={sigmas['d05']} ==")

    if args.write:
        PRESET_DIR.mkdir(parents=True, exist_ok=True)
        for key in ("d02", "d05"):
            for kind, sigma_priv in (("pointwise", 0.0), ("gaussian", sigmas[key])):
                name = f"{kind}-{key}"
                payload = {
                    "name": name,
                    "blob_centers": BLOB_CENTERS,
                    "blob_classes": BLOB_CLASSES,
                    "per_blob": PER_BLOB,
                    "sigma_tech": sigma_tech,
                    "priv_centers": PRIV_CENTERS[key],
                    "sigma_priv": sigma_priv,
                    "seed": seed,
                }
                path = PRESET_DIR / f"{name}.json"
                path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
                print(f"wrote {path}")


if __name__ == "__main__":
    main()
