"""Command-line harness: dataset generation, benchmark runs, statistics, transforms.

Exit codes: 0 success, 1 usage error, 2 data or numeric error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import io as pio
from .datagen import load_preset, make_paired
from .figures import save_score_boxplot
from .harness import METHOD_NAMES, SIGNIFICANCE, ExperimentPlan, run_plan
from .numerics import minmax_normalize, pca_fit, pca_transform
from .stats import ALTERNATIVES, wilcoxon_signed_rank

USAGE_ERROR = 1
DATA_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _build_parser() -> _Parser:
    parser = _Parser(prog="privclust", description="Clustering benchmarks with a privileged data view.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a preset dataset as X.csv, Xp.csv, truth.csv")
    gen.add_argument("--preset", required=True, help="preset name or path to a preset JSON file")
    gen.add_argument("--seed", type=int, default=None, help="override the preset's data seed")
    gen.add_argument("--out", required=True, help="output directory")

    run = sub.add_parser("run", help="run a method matrix and write reports, CSV, and figures")
    run.add_argument("--preset", help="generate the dataset from a preset")
    run.add_argument("--x", help="technical matrix CSV (alternative to --preset)")
    run.add_argument("--xp", help="privileged matrix CSV")
    run.add_argument("--truth", help="true labels CSV (one integer per row)")
    run.add_argument("--methods", default="kmeans-X", help=f"comma list or 'all'; available: {','.join(METHOD_NAMES)}")
    run.add_argument("--reps", type=int, default=100, help="repetitions per method (default 100)")
    run.add_argument("--k", type=int, default=2, help="number of clusters (default 2)")
    run.add_argument("--seed", type=int, default=0, help="master seed")
    run.add_argument("--normalize", action=argparse.BooleanOptionalAction, default=True, help="min-max normalize inputs")
    run.add_argument("--pca", type=int, default=None, metavar="N", help="reduce to N principal components")
    run.add_argument("--consensus-runs", type=int, default=100, help="inner runs for arimax/pdot (default 100)")
    run.add_argument("--figures", action=argparse.BooleanOptionalAction, default=True, help="write box-plot figures")
    run.add_argument("--out", required=True, help="output directory")

    stats = sub.add_parser("stats", help="Wilcoxon signed-rank comparison of two report files")
    stats.add_argument("--a", required=True, help="first report JSON")
    stats.add_argument("--b", required=True, help="second report JSON")
    stats.add_argument("--metric", choices=("nmi", "ari"), default="nmi")
    stats.add_argument("--alternative", choices=ALTERNATIVES + ("all",), default="all")

    pca = sub.add_parser("pca", help="fit PCA on a CSV matrix and write the transformed matrix")
    pca.add_argument("--x", required=True)
    pca.add_argument("--components", type=int, required=True)
    pca.add_argument("--out", required=True)

    norm = sub.add_parser("normalize", help="min-max normalize a CSV matrix")
    norm.add_argument("--x", required=True)
    norm.add_argument("--out", required=True)
    return parser


def _cmd_gen(args) -> int:
    cfg = load_preset(args.preset)
    if args.seed is not None:
        cfg.seed = args.seed
    data = make_paired(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    pio.save_matrix(out / "X.csv", data.tech)
    pio.save_matrix(out / "Xp.csv", data.priv)
    pio.save_labels(out / "truth.csv", data.truth)
    print(f"preset {cfg.name}: n={data.tech.shape[0]}, tech d={data.tech.shape[1]}, priv d={data.priv.shape[1]}")
    print(f"privileged class separation = {cfg.class_separation():.6f} (sigma_priv = {cfg.sigma_priv})")
    print(f"wrote {out / 'X.csv'}, {out / 'Xp.csv'}, {out / 'truth.csv'}")
    return 0


def _load_dataset(args):
    if args.preset:
        cfg = load_preset(args.preset)
        if args.seed is not None:
            cfg.seed = args.seed
        return make_paired(cfg), cfg.name
    if not args.x or not args.xp:
        raise SystemExit(USAGE_ERROR)
    data = pio.load_paired(args.x, args.xp, args.truth)
    return data, Path(args.x).stem


def _cmd_run(args) -> int:
    if args.preset and args.x:
        print("privclust run: use either --preset or --x/--xp, not both", file=sys.stderr)
        return USAGE_ERROR
    if not args.preset and not (args.x and args.xp):
        print("privclust run: need --preset or both --x and --xp", file=sys.stderr)
        return USAGE_ERROR
    methods = list(METHOD_NAMES) if args.methods == "all" else [m.strip() for m in args.methods.split(",") if m.strip()]
    unknown = [m for m in methods if m not in METHOD_NAMES]
    if unknown:
        print(f"privclust run: unknown method(s) {unknown}; available: {', '.join(METHOD_NAMES)}", file=sys.stderr)
        return USAGE_ERROR

    data, dataset_id = _load_dataset(args)
    plan = ExperimentPlan(
        methods=methods,
        repetitions=args.reps,
        k=args.k,
        seed=args.seed,
        normalize=args.normalize,
        pca=args.pca,
        consensus_runs=args.consensus_runs,
        dataset_id=dataset_id,
    )
    reports, combined = run_plan(plan, data)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for method, report in reports.items():
        pio.write_report(report, out / f"report_{method}.json")
    (out / "combined.json").write_text(json.dumps(combined, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    with (out / "runs.csv").open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["method", "rep", "seed", "ari", "nmi"])
        for method in methods:
            for entry in reports[method].runs:
                writer.writerow(
                    [
                        method,
                        entry["rep"],
                        entry["seed"],
                        "" if entry["ari"] is None else repr(entry["ari"]),
                        "" if entry["nmi"] is None else repr(entry["nmi"]),
                    ]
                )

    if args.figures and data.truth is not None:
        for metric in ("nmi", "ari"):
            scores = {m: [r[metric] for r in reports[m].runs] for m in methods}
            save_score_boxplot(scores, out / f"boxplot_{metric}.png", metric=metric.upper(), title=dataset_id)

    for method in methods:
        summary = reports[method].summary
        if summary:
            s = summary["nmi"]
            print(
                f"{method:>16}: nmi mean={s['mean']:.4f} median={s['median']:.4f} "
                f"min={s['min']:.4f} max={s['max']:.4f} st.dev={s['st_dev']:.4f}"
            )
        else:
            print(f"{method:>16}: {len(reports[method].runs)} runs (no truth labels, scores omitted)")
    print(f"wrote reports to {out}")
    return 0


def _cmd_stats(args) -> int:
    rep_a = pio.read_report(args.a)
    rep_b = pio.read_report(args.b)
    xs = [r[args.metric] for r in rep_a.runs]
    ys = [r[args.metric] for r in rep_b.runs]
    if any(v is None for v in xs) or any(v is None for v in ys):
        raise ValueError("reports lack scores (runs without truth labels)")
    if len(xs) != len(ys):
        raise ValueError(f"run-count mismatch: {len(xs)} vs {len(ys)}")
    alternatives = ALTERNATIVES if args.alternative == "all" else (args.alternative,)
    label = {"two-sided": "a = b", "greater": "a > b", "less": "a < b"}
    print(f"comparing {rep_a.method} (a) vs {rep_b.method} (b) on {args.metric}, n = {len(xs)}")
    for alt in alternatives:
        res = wilcoxon_signed_rank(xs, ys, alternative=alt)
        verdict = "yes" if res.p_value < SIGNIFICANCE else "no"
        print(
            f"  H[{label[alt]:5}]  W = {res.statistic:10.2f}  p-value = {res.p_value:.6g}  "
            f"reject at {SIGNIFICANCE}? {verdict}  ({res.method})"
        )
    return 0


def _cmd_pca(args) -> int:
    m = pio.load_matrix(args.x)
    model = pca_fit(m, args.components)
    pio.save_matrix(args.out, pca_transform(model, m))
    print(f"wrote {args.out} ({m.shape[0]} x {args.components}); eigenvalues: "
          + ", ".join(f"{v:.6g}" for v in model.eigenvalues))
    return 0


def _cmd_normalize(args) -> int:
    pio.save_matrix(args.out, minmax_normalize(pio.load_matrix(args.x)))
    print(f"wrote {args.out}")
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "run": _cmd_run,
    "stats": _cmd_stats,
    "pca": _cmd_pca,
    "normalize": _cmd_normalize,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (ValueError, OSError) as exc:
        print(f"privclust {args.command}: error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
