"""Report emission: per-trial CSV, aggregate CSV, text table, SVG chart.

Float metrics are written with 6 decimals and rows follow grid order, so a
rerun of the same config reproduces the files byte for byte.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .evaluation import AggregateRow, TrialResult

RESULTS_HEADER = "dataset,method,task,mechanism,rho,seed,auc,f1,mcc,status"
AGGREGATE_HEADER = ("dataset,method,task,mechanism,rho,n_trials,"
                    "auc_mean,auc_sd,f1_mean,f1_sd,mcc_mean,mcc_sd")


def _fmt(x: Optional[float]) -> str:
    return "" if x is None else "%.6f" % x


def format_results_csv(trials: Sequence[TrialResult]) -> str:
    lines = [RESULTS_HEADER]
    for t in trials:
        lines.append(",".join([
            t.dataset, t.method, t.task, t.mechanism, "%g" % t.rho,
            str(t.seed), _fmt(t.auc), _fmt(t.f1), _fmt(t.mcc), t.status]))
    return "\n".join(lines) + "\n"


def format_aggregate_csv(rows: Sequence[AggregateRow]) -> str:
    lines = [AGGREGATE_HEADER]
    for r in rows:
        lines.append(",".join([
            r.dataset, r.method, r.task, r.mechanism, "%g" % r.rho,
            str(r.n_trials), _fmt(r.auc_mean), _fmt(r.auc_sd),
            _fmt(r.f1_mean), _fmt(r.f1_sd), _fmt(r.mcc_mean), _fmt(r.mcc_sd)]))
    return "\n".join(lines) + "\n"


def table_view(rows: Sequence[AggregateRow]) -> str:
    """Aligned 3-decimal summary for the terminal."""
    header = ("dataset", "method", "task", "mech", "rho", "n", "auc", "f1", "mcc")
    body = []
    for r in rows:
        def f3(x):
            return "---" if x is None else "%.3f" % x
        body.append((r.dataset, r.method, r.task, r.mechanism, "%g" % r.rho,
                     str(r.n_trials), f3(r.auc_mean), f3(r.f1_mean), f3(r.mcc_mean)))
    widths = [max(len(row[i]) for row in [header] + body) for i in range(len(header))]
    out = []
    for row in [header] + body:
        out.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(out) + "\n"


def save_chart(rows: Sequence[AggregateRow], path: str) -> None:
    """Grouped bar chart of mean AUC: datasets on the x-axis, one bar per
    method, one panel per rho. Written as SVG with fixed hash salt and no
    date metadata so output is stable."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "misslink"
    rhos = sorted({r.rho for r in rows})
    datasets = list(dict.fromkeys(r.dataset for r in rows))
    methods = list(dict.fromkeys(r.method for r in rows))
    fig, axes = plt.subplots(len(rhos), 1, figsize=(max(6, 1.4 * len(datasets)),
                                                    3.2 * len(rhos)), squeeze=False)
    width = 0.8 / max(1, len(methods))
    for ax_idx, rho in enumerate(rhos):
        ax = axes[ax_idx][0]
        for mi, method in enumerate(methods):
            xs, ys = [], []
            for di, ds in enumerate(datasets):
                row = next((r for r in rows
                            if r.dataset == ds and r.method == method
                            and r.rho == rho), None)
                if row is not None and row.auc_mean is not None:
                    xs.append(di + mi * width)
                    ys.append(row.auc_mean)
            if xs:
                ax.bar(xs, ys, width=width, label=method)
        ax.axhline(0.5, color="gray", linewidth=0.8, linestyle="--")
        ax.set_xticks([i + 0.4 - width / 2 for i in range(len(datasets))])
        ax.set_xticklabels(datasets, rotation=20, ha="right", fontsize=8)
        ax.set_ylabel("mean AUC")
        ax.set_ylim(0.0, 1.0)
        ax.set_title(f"rho = {rho:g}")
        ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
