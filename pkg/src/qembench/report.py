"""Result files: delimited output, a grouped text table, plot data and
rendered figures.

write_report emits, into one directory:

* results.csv — one row per record, fixed column order
  (encoding, model, pca_dim, seed, accuracy, precision, sensitivity, f1,
  roc_auc, kappa, encode_ms, train_ms, predict_ms, error);
* report.txt — accuracy grouped by model then encoding, mean +/- std
  over seeds;
* explained_variance.csv — per-component ratio and cumulative points;
* explained_variance.png / accuracy_by_encoding.png — rendered figures.
"""

from __future__ import annotations

import csv
import os
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .bench import GridResult
from .exceptions import QembenchError
from .pipeline import (
    CATEGORICAL_COLUMNS,
    LabeledDataset,
    ordinal_matrix,
    pearson_corr,
    vif_scores,
)

RESULT_COLUMNS = (
    "encoding", "model", "pca_dim", "seed",
    "accuracy", "precision", "sensitivity", "f1", "roc_auc", "kappa",
    "encode_ms", "train_ms", "predict_ms", "error",
)


def _record_row(r) -> list[str]:
    if r.metrics is None:
        metric_fields = [""] * 6
    else:
        m = r.metrics
        metric_fields = [
            f"{m.accuracy:.6f}", f"{m.precision:.6f}", f"{m.sensitivity:.6f}",
            f"{m.f1:.6f}", f"{m.roc_auc:.6f}", f"{m.cohen_kappa:.6f}",
        ]
    return [
        r.encoding, r.model, str(r.pca_dim), str(r.seed),
        *metric_fields,
        f"{r.encode_ms:.3f}", f"{r.train_ms:.3f}", f"{r.predict_ms:.3f}",
        r.error or "",
    ]


def _grouped_table(records) -> str:
    """Accuracy per model block, encodings as columns, one row per pca_dim."""
    encodings = list(dict.fromkeys(r.encoding for r in records))
    models = list(dict.fromkeys(r.model for r in records))
    dims = sorted({r.pca_dim for r in records})
    cells: dict[tuple, list[float]] = defaultdict(list)
    failures: dict[tuple, int] = defaultdict(int)
    for r in records:
        key = (r.model, r.encoding, r.pca_dim)
        if r.metrics is not None:
            cells[key].append(r.metrics.accuracy)
        else:
            failures[key] += 1

    width = max(18, max(len(e) for e in encodings) + 2)
    lines = ["Accuracy by model / encoding / PCA dimension (mean +/- std over seeds)", ""]
    for model in models:
        lines.append(f"=== {model} ===")
        header = "  pca_dim | " + " | ".join(e.ljust(width) for e in encodings)
        lines.append(header)
        lines.append("  " + "-" * (len(header) - 2))
        for dim in dims:
            row = [f"{dim:8d} "]
            for enc in encodings:
                accs = cells.get((model, enc, dim), [])
                if accs:
                    mean = float(np.mean(accs))
                    std = float(np.std(accs))
                    cell = f"{mean:.4f} +/- {std:.4f}"
                else:
                    n_failed = failures.get((model, enc, dim), 0)
                    cell = "failed" if n_failed else "n/a"
                row.append(cell.ljust(width))
            lines.append("| ".join(row))
        lines.append("")
    return "\n".join(lines)


def write_report(result: GridResult, out_dir) -> list[str]:
    """Write all report files; returns the paths written."""
    if not result.records:
        raise QembenchError("write_report needs at least one record")
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise QembenchError(f"cannot create output directory {out_dir}: {exc}") from None
    paths = []

    results_path = os.path.join(out_dir, "results.csv")
    with open(results_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULT_COLUMNS)
        for r in result.records:
            writer.writerow(_record_row(r))
    paths.append(results_path)

    report_path = os.path.join(out_dir, "report.txt")
    body = _grouped_table(result.records)
    if result.skipped_unsupported:
        body += (
            "\nUnsupported model kinds excluded from the grid: "
            + ", ".join(result.skipped_unsupported) + "\n"
        )
    body += f"\nExplained-variance elbow index: {result.elbow}\n"
    with open(report_path, "w", encoding="utf-8") as fh:
        fh.write(body)
    paths.append(report_path)

    paths.append(write_variance_csv(result.variance_ratios, out_dir))
    paths.append(render_variance_figure(result.variance_ratios, result.elbow, out_dir))
    paths.append(_render_accuracy_figure(result, out_dir))
    return paths


def write_variance_csv(ratios, out_dir) -> str:
    """Explained-variance curve points as delimited plot data."""
    path = os.path.join(out_dir, "explained_variance.csv")
    cumulative = np.cumsum(ratios)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(("component", "ratio", "cumulative"))
        for i, (ratio, cum) in enumerate(zip(ratios, cumulative)):
            writer.writerow((i, f"{ratio:.12e}", f"{cum:.12f}"))
    return path


def render_variance_figure(ratios, elbow: int, out_dir) -> str:
    path = os.path.join(out_dir, "explained_variance.png")
    cumulative = np.cumsum(ratios)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(ratios, marker="o", ms=3, label="explained variance ratio")
    ax.plot(cumulative, marker=".", ms=3, label="cumulative")
    ax.axvline(elbow, color="crimson", ls="--", lw=1, label=f"elbow index = {elbow}")
    ax.set_xlabel("principal component")
    ax.set_ylabel("explained variance")
    ax.set_title("Explained variance with elbow point")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def _render_accuracy_figure(result: GridResult, out_dir) -> str:
    path = os.path.join(out_dir, "accuracy_by_encoding.png")
    records = [r for r in result.records if r.metrics is not None]
    dims = sorted({r.pca_dim for r in result.records})
    top_dim = dims[-1]
    encodings = list(dict.fromkeys(r.encoding for r in result.records))
    models = list(dict.fromkeys(r.model for r in result.records))
    means = np.full((len(encodings), len(models)), np.nan)
    for i, enc in enumerate(encodings):
        for j, model in enumerate(models):
            accs = [
                r.metrics.accuracy
                for r in records
                if r.encoding == enc and r.model == model and r.pca_dim == top_dim
            ]
            if accs:
                means[i, j] = float(np.mean(accs))
    fig, ax = plt.subplots(figsize=(max(7, 1.1 * len(models)), 4.5))
    x = np.arange(len(models))
    bar_w = 0.8 / max(len(encodings), 1)
    for i, enc in enumerate(encodings):
        ax.bar(x + i * bar_w, means[i], bar_w, label=enc)
    ax.set_xticks(x + 0.4 - bar_w / 2)
    ax.set_xticklabels(models, rotation=30, ha="right")
    ax.set_ylabel("accuracy")
    ax.set_title(f"Test accuracy at PCA dimension {top_dim}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def inspection_report(ds: LabeledDataset, drop_profile=None) -> str:
    """Preprocessing diagnostics: drop profile, class balance,
    correlations, VIFs, category maps.

    Correlations and VIFs are computed on an ordinal view (numeric
    columns as-is, categoricals label-encoded) so they refer to the
    original columns rather than one-hot indicators.
    """
    from .pipeline import DEFAULT_DROP_PROFILE

    if drop_profile is None:
        drop_profile = DEFAULT_DROP_PROFILE
    matrix, names = ordinal_matrix(ds)
    corr, corr_flags = pearson_corr(matrix, return_flags=True)
    vifs, vif_flags = vif_scores(matrix, return_flags=True)
    n0, n1 = ds.class_counts()

    lines = ["Preprocessing report", "====================", ""]
    meta = ds.meta
    if meta:
        lines.append(
            f"rows ingested: {meta.get('rows_ingested', 'n/a')}   "
            f"dropped: {meta.get('rows_dropped', 0)}   imputed: {meta.get('rows_imputed', 0)}"
        )
    lines.append(f"rows after cleaning: {ds.row_count}")
    lines.append(f"class balance: no={n0}  yes={n1}  (minority {min(n0, n1)})")
    lines.append(f"benchmark drop profile: {', '.join(drop_profile) or '(none)'}")
    lines.append("")

    lines.append("Variance inflation factors (ordinal-coded columns):")
    for name, vif, flag in zip(names, vifs, vif_flags):
        note = "  [constant column]" if flag else ""
        lines.append(f"  {name:<20s} {vif:10.2f}{note}")
    lines.append("")

    lines.append("Strongest absolute correlations (|r| >= 0.5):")
    pairs = []
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            if abs(corr[i, j]) >= 0.5:
                pairs.append((abs(corr[i, j]), names[i], names[j], corr[i, j]))
    for _, a, b, r in sorted(pairs, reverse=True):
        lines.append(f"  {a} ~ {b}: {r:+.3f}")
    if not pairs:
        lines.append("  (none)")
    if corr_flags.any():
        flagged = [names[i] for i in np.flatnonzero(corr_flags)]
        lines.append(f"  zero-variance columns (correlation set to 0): {flagged}")
    lines.append("")

    categorical = [c for c in CATEGORICAL_COLUMNS if c in ds.columns]
    if categorical:
        lines.append("Category maps:")
        for name in categorical:
            arr = ds.data[name]
            if not np.issubdtype(arr.dtype, np.number):
                cats = sorted({str(v) for v in arr})
                lines.append(f"  {name}: {', '.join(cats)}")
    return "\n".join(lines) + "\n"
