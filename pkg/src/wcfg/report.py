"""Benchmark reporting: delimited output plus rendered figures.

The CSV mirrors the solver-log vocabulary (cost, time, bt, BT) with an
added backend column; alongside it a bar-chart figure compares solve
time and total backtracks per backend.
"""

from __future__ import annotations

import csv
import os

CSV_COLUMNS = ["instance", "backend", "cost", "time", "bt", "BT"]


def write_bench_csv(rows: list[dict], path: str) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in CSV_COLUMNS})


def render_bench_figure(rows: list[dict], path: str) -> None:
    """Grouped bars of solve time and total backtracks per backend."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    instances = sorted({r["instance"] for r in rows})
    backends = sorted({r["backend"] for r in rows})
    fig, axes = plt.subplots(1, 2, figsize=(11, 4))
    width = 0.8 / max(len(backends), 1)
    xs = range(len(instances))
    for axis, column, label in ((axes[0], "time", "time to best (s)"),
                                (axes[1], "BT", "total backtracks")):
        for bi, backend in enumerate(backends):
            by_inst = {r["instance"]: r for r in rows if r["backend"] == backend}
            vals = [float(by_inst[i][column]) if i in by_inst else 0.0
                    for i in instances]
            axis.bar([x + bi * width for x in xs], vals, width, label=backend)
        axis.set_xticks([x + width * (len(backends) - 1) / 2 for x in xs])
        axis.set_xticklabels(instances, rotation=45, ha="right", fontsize=8)
        axis.set_ylabel(label)
        axis.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def bench_paths(out_dir: str, stem: str = "bench"):
    return (os.path.join(out_dir, f"{stem}.csv"),
            os.path.join(out_dir, f"{stem}.png"))
