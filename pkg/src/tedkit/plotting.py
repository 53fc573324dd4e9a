"""Figures for the bench report (matplotlib, file output only)."""
from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["plot_step_ratios", "plot_steps_vs_size", "render_bench"]


def plot_steps_vs_size(rows, path: Path) -> Path:
    """Observed relaxations against the larger tree size, one panel per engine.

    ``rows`` are dicts with ``family``, ``m``, ``n``, ``engine``, ``observed``.
    """
    engines = sorted({r["engine"] for r in rows})
    fig, axes = plt.subplots(1, len(engines), figsize=(5 * len(engines), 4), squeeze=False)
    for ax, engine in zip(axes[0], engines):
        series = defaultdict(list)
        for r in rows:
            if r["engine"] == engine:
                label = f"{r['family']} m={'n' if r['m'] == r['n'] else r['m']}"
                series[label].append((r["n"], max(r["observed"], 1)))
        ax.set_prop_cycle(color=plt.get_cmap("tab20").colors)
        for label, pts in sorted(series.items()):
            pts.sort()
            ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", ms=3, lw=1, label=label)
        ax.set_xscale("log", base=2)
        ax.set_yscale("log")
        ax.set_xlabel("n (larger tree)")
        ax.set_ylabel("relaxations")
        ax.set_title(engine)
    axes[0][-1].legend(fontsize=6, loc="upper left", bbox_to_anchor=(1.02, 1.0))
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_step_ratios(rows, path: Path) -> Path:
    """observed / bound per (family, sizes), grouped by engine; 1.0 is the cap."""
    engines = sorted({r["engine"] for r in rows})
    fig, ax = plt.subplots(figsize=(10, 4))
    for k, engine in enumerate(engines):
        sub = [r for r in rows if r["engine"] == engine]
        xs = [i + 0.8 * k / len(engines) for i in range(len(sub))]
        ax.bar(xs, [r["observed"] / r["bound"] for r in sub], width=0.8 / len(engines), label=engine)
    labels = [f"{r['family']}\n{r['m']}x{r['n']}" for r in rows if r["engine"] == engines[0]]
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, fontsize=5, rotation=90)
    ax.axhline(1.0, color="k", lw=0.8, ls="--")
    ax.set_yscale("log")
    ax.set_ylabel("observed / bound")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_bench(rows, outdir) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    return [
        plot_steps_vs_size(rows, outdir / "steps_vs_size.png"),
        plot_step_ratios(rows, outdir / "step_ratios.png"),
    ]
