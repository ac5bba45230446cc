"""Rendered reports for corpus runs: a delimited table plus figures.

Figures are written to files (never shown interactively); matplotlib is
imported lazily so the computational core has no plotting dependency at
import time.
"""

from __future__ import annotations

import csv
import os


def write_corpus_report(rows, outdir):
    """Write corpus_results.csv plus verdict-matrix and summary figures.

    ``rows`` holds (entry, check, expected, actual) tuples; returns the
    list of file paths written.
    """
    os.makedirs(outdir, exist_ok=True)
    paths = []
    csv_path = os.path.join(outdir, "corpus_results.csv")
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["entry", "check", "expected", "actual", "matches"])
        for entry, check, expected, actual in rows:
            writer.writerow([entry, check, expected, actual,
                             "yes" if expected == actual else "no"])
    paths.append(csv_path)
    paths.extend(_write_figures(rows, outdir))
    return paths


def _write_figures(rows, outdir):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.colors import ListedColormap

    entries = sorted({r[0] for r in rows})
    checks = sorted({r[1] for r in rows})
    # 0 = not applicable, 1 = expectation met, 2 = expectation missed
    grid = [[0] * len(checks) for _ in entries]
    for entry, check, expected, actual in rows:
        i, j = entries.index(entry), checks.index(check)
        grid[i][j] = 1 if expected == actual else 2

    fig, ax = plt.subplots(figsize=(2 + 1.2 * len(checks), 1 + 0.4 * len(entries)))
    cmap = ListedColormap(["#e8e8e8", "#2e7d32", "#c62828"])
    ax.imshow(grid, cmap=cmap, vmin=0, vmax=2, aspect="auto")
    ax.set_xticks(range(len(checks)), checks, rotation=30, ha="right")
    ax.set_yticks(range(len(entries)), entries)
    ax.set_title("corpus verdicts vs expectations")
    for i in range(len(entries)):
        for j in range(len(checks)):
            if grid[i][j]:
                ax.text(j, i, "ok" if grid[i][j] == 1 else "FAIL",
                        ha="center", va="center", color="white", fontsize=8)
    fig.tight_layout()
    matrix_path = os.path.join(outdir, "corpus_matrix.png")
    fig.savefig(matrix_path, dpi=150)
    plt.close(fig)

    met = sum(1 for r in rows if r[2] == r[3])
    missed = len(rows) - met
    fig, ax = plt.subplots(figsize=(4, 3))
    ax.bar(["met", "missed"], [met, missed], color=["#2e7d32", "#c62828"])
    ax.set_ylabel("checks")
    ax.set_title("corpus expectation summary")
    fig.tight_layout()
    summary_path = os.path.join(outdir, "corpus_summary.png")
    fig.savefig(summary_path, dpi=150)
    plt.close(fig)
    return [matrix_path, summary_path]
