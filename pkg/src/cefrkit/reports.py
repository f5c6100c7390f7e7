"""Report rendering: text tables, TSV, and matplotlib figures.

Every report writer emits machine-readable JSON plus a human-readable
table; the figure helpers render PNG companions (relevance correlations,
confusion matrices, importance bars, pipeline rankings) next to the
delimited output.
"""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from cefrkit.corpus import LEVELS
from cefrkit.ml.pipeline import EvalReport, ImportanceReport, RankedPipeline
from cefrkit.stats.relevance import ADJACENT_PAIRS, RelevanceVerdict

CHECK = "yes"
BLANK = "-"


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _write_json(path: Path, payload) -> None:
    _write(path, json.dumps(payload, ensure_ascii=False, indent=1, sort_keys=True) + "\n")


def _table(rows: list[list[str]], header: list[str]) -> str:
    widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
    lines = ["  ".join(str(h).ljust(w) for h, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def relevance_table(verdicts: list[RelevanceVerdict], relevant_only: bool = True) -> str:
    """Per-feature level means (SD) with adjacent-pair separation marks."""
    header = ["feature", *LEVELS, *[f"{a}-{b}" for a, b in ADJACENT_PAIRS], "rho", "verdict"]
    rows = []
    for v in verdicts:
        if relevant_only and not v.relevant:
            continue
        cells = [v.feature_id]
        for level in LEVELS:
            if v.level_means:
                cells.append(f"{v.level_means[level]:.2f} ({v.level_sds.get(level, float('nan')):.2f})")
            else:
                cells.append(BLANK)
        for a, b in ADJACENT_PAIRS:
            cells.append(CHECK if v.adjacent_significant.get(f"{a}-{b}") else BLANK)
        cells.append(f"{v.spearman_rho:.3f}" if v.spearman_rho is not None else BLANK)
        cells.append("relevant" if v.relevant else "rejected")
        rows.append(cells)
    return _table(rows, header)


def relevance_tsv(verdicts: list[RelevanceVerdict]) -> str:
    header = [
        "feature_id", "relevant", "rationale", "anova_p", "spearman_rho", "monotonic",
        *[f"mean_{l}" for l in LEVELS], *[f"sd_{l}" for l in LEVELS],
        *[f"sig_{a}_{b}" for a, b in ADJACENT_PAIRS],
    ]
    lines = ["\t".join(header)]
    for v in verdicts:
        cells = [
            v.feature_id,
            str(v.relevant).lower(),
            v.rationale,
            f"{v.anova_p:.6g}" if v.anova_p is not None else "NA",
            f"{v.spearman_rho:.6g}" if v.spearman_rho is not None else "NA",
            str(v.monotonic).lower(),
        ]
        for level in LEVELS:
            cells.append(f"{v.level_means[level]:.6g}" if v.level_means else "NA")
        for level in LEVELS:
            cells.append(f"{v.level_sds[level]:.6g}" if v.level_sds else "NA")
        for a, b in ADJACENT_PAIRS:
            cells.append(str(v.adjacent_significant.get(f"{a}-{b}", False)).lower())
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


def relevance_figure(verdicts: list[RelevanceVerdict], path: Path) -> None:
    """Bar chart of level correlations for the relevant features."""
    kept = [v for v in verdicts if v.relevant and v.spearman_rho is not None]
    kept.sort(key=lambda v: v.spearman_rho)
    if not kept:
        return
    height = max(2.0, 0.28 * len(kept))
    fig, ax = plt.subplots(figsize=(7, height))
    names = [v.feature_id for v in kept]
    rhos = [v.spearman_rho for v in kept]
    ax.barh(names, rhos, color=["#b4533c" if r < 0 else "#3c73b4" for r in rhos])
    ax.axvline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel("Spearman correlation with proficiency level")
    ax.set_title("Relevant features")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_relevance_report(verdicts: list[RelevanceVerdict], out_dir: str | Path, stem: str = "relevance") -> list[Path]:
    out_dir = Path(out_dir)
    paths = [out_dir / f"{stem}.json", out_dir / f"{stem}.tsv", out_dir / f"{stem}.txt", out_dir / f"{stem}.png"]
    _write_json(paths[0], [v.to_json() for v in verdicts])
    _write(paths[1], relevance_tsv(verdicts))
    _write(paths[2], relevance_table(verdicts))
    relevance_figure(verdicts, paths[3])
    return paths


def eval_table(report: EvalReport) -> str:
    rows = []
    for i, level in enumerate(LEVELS):
        rows.append(
            [
                level,
                f"{report.precision[i]:.3f}",
                f"{report.recall[i]:.3f}",
                f"{report.f1[i]:.3f}",
            ]
        )
    rows.append(
        [
            "macro",
            f"{report.macro_precision:.3f} ({report.precision_sd:.3f})",
            f"{report.macro_recall:.3f} ({report.recall_sd:.3f})",
            f"{report.macro_f1:.3f} ({report.f1_sd:.3f})",
        ]
    )
    out = [
        f"rows: {report.n_rows}",
        f"accuracy: {report.accuracy:.4f}",
        f"balanced accuracy: {report.balanced_accuracy:.4f}",
        f"within-one-level accuracy: {report.within_one_level_accuracy:.4f}",
        "",
        _table(rows, ["level", "precision", "recall", "f1"]),
        "confusion (rows = true, cols = predicted):",
    ]
    for level, row in zip(LEVELS, report.confusion):
        out.append("  " + level + "  " + " ".join(f"{c:4d}" for c in row))
    if report.per_text_type_recall:
        out.append("")
        type_rows = [[k, f"{v:.3f}"] for k, v in sorted(report.per_text_type_recall.items())]
        out.append(_table(type_rows, ["level/text type", "recall"]))
    return "\n".join(out) + "\n"


def confusion_figure(report: EvalReport, path: Path, title: str = "Confusion matrix") -> None:
    confusion = np.array(report.confusion)
    fig, ax = plt.subplots(figsize=(4.2, 3.8))
    image = ax.imshow(confusion, cmap="Blues")
    ax.set_xticks(range(len(LEVELS)), LEVELS)
    ax.set_yticks(range(len(LEVELS)), LEVELS)
    ax.set_xlabel("predicted")
    ax.set_ylabel("true")
    ax.set_title(title)
    for i in range(len(LEVELS)):
        for j in range(len(LEVELS)):
            color = "white" if confusion[i, j] > confusion.max() / 2 else "black"
            ax.text(j, i, str(confusion[i, j]), ha="center", va="center", color=color)
    fig.colorbar(image, ax=ax, shrink=0.85)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_eval_report(report: EvalReport, out_dir: str | Path, stem: str = "eval") -> list[Path]:
    out_dir = Path(out_dir)
    paths = [out_dir / f"{stem}.json", out_dir / f"{stem}.txt", out_dir / f"{stem}.png"]
    _write_json(paths[0], report.to_json())
    _write(paths[1], eval_table(report))
    confusion_figure(report, paths[2])
    return paths


def ranking_table(ranked: list[RankedPipeline]) -> str:
    rows = [
        [
            r.spec.label(),
            str(r.n_features),
            f"{r.cv.mean_accuracy:.4f}",
            f"{r.cv.sd_accuracy:.4f}",
            f"{r.cv.mean_macro_f1:.4f}",
        ]
        for r in ranked
    ]
    return _table(rows, ["pipeline", "features", "cv accuracy", "sd", "macro f1"])


def ranking_figure(ranked: list[RankedPipeline], path: Path) -> None:
    if not ranked:
        return
    fig, ax = plt.subplots(figsize=(6.4, 3.2))
    labels = [r.spec.label() for r in ranked]
    accuracies = [r.cv.mean_accuracy for r in ranked]
    sds = [r.cv.sd_accuracy for r in ranked]
    ax.bar(labels, accuracies, yerr=sds, capsize=3, color="#3c73b4")
    ax.set_ylabel("cross-validation accuracy")
    ax.set_ylim(0.0, 1.05)
    ax.tick_params(axis="x", rotation=20)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_ranking_report(ranked: list[RankedPipeline], out_dir: str | Path, stem: str = "pipelines") -> list[Path]:
    out_dir = Path(out_dir)
    paths = [out_dir / f"{stem}.json", out_dir / f"{stem}.txt", out_dir / f"{stem}.png"]
    _write_json(paths[0], [r.to_json() for r in ranked])
    _write(paths[1], ranking_table(ranked))
    ranking_figure(ranked, paths[2])
    return paths


def importance_table(report: ImportanceReport) -> str:
    rows = [
        [fid, f"{stats['mean_drop']:.4f}", f"{stats['sd_drop']:.4f}"]
        for fid, stats in sorted(
            report.features.items(), key=lambda kv: -kv[1]["mean_drop"]
        )
    ]
    head = (
        f"metric: {report.metric}, base score: {report.base_score:.4f}, "
        f"repeats: {report.repeats}\n\n"
    )
    return head + _table(rows, ["feature", "mean drop", "sd"])


def importance_figure(report: ImportanceReport, path: Path) -> None:
    items = sorted(report.features.items(), key=lambda kv: kv[1]["mean_drop"])
    if not items:
        return
    names = [k for k, _ in items]
    means = [v["mean_drop"] for _, v in items]
    sds = [v["sd_drop"] for _, v in items]
    height = max(2.0, 0.3 * len(items))
    fig, ax = plt.subplots(figsize=(6.4, height))
    ax.barh(names, means, xerr=sds, capsize=2, color="#3c73b4")
    ax.axvline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel(f"decrease in {report.metric}")
    ax.set_title("Permutation feature importance")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_importance_report(report: ImportanceReport, out_dir: str | Path, stem: str = "importance") -> list[Path]:
    out_dir = Path(out_dir)
    paths = [out_dir / f"{stem}.json", out_dir / f"{stem}.txt", out_dir / f"{stem}.png"]
    _write_json(paths[0], report.to_json())
    _write(paths[1], importance_table(report))
    importance_figure(report, paths[2])
    return paths
