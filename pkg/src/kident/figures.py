"""Figure rendering for the report subcommands.

Each function writes one PNG next to the delimited output and returns the
path. matplotlib runs on the Agg backend so the CLI works headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _finish(fig, outdir: Path, name: str) -> Path:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / name
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_stats_figure(rows, n: int, outdir) -> Path:
    """Min/mean/max nearest distance per skeleton edge count."""
    edges = [r.edges for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(edges, [r.dmin for r in rows], "o-", label="min")
    ax.plot(edges, [float(r.mean) for r in rows], "s-", label="mean")
    ax.plot(edges, [r.dmax for r in rows], "^-", label="max")
    ax.set_xlabel("skeleton edges")
    ax.set_ylabel("nearest-neighbor table distance")
    ax.set_title(f"MEC nearest-neighbor distances, n={n}")
    ax.legend()
    ax.grid(True, alpha=0.3)
    return _finish(fig, outdir, f"mec_distances_n{n}.png")


def save_chain_figure(results, outdir) -> Path:
    """Brute-force chain nearest distances against the closed forms.

    ``results`` rows: (mode, n, computed, expected).
    """
    fig, axes = plt.subplots(1, 2, figsize=(8, 3.5))
    for ax, mode in zip(axes, ("mn", "bn")):
        ns = [r[1] for r in results if r[0] == mode]
        comp = [r[2] for r in results if r[0] == mode]
        exp = [r[3] for r in results if r[0] == mode]
        ax.plot(ns, exp, "-", color="gray", label="closed form")
        ax.plot(ns, comp, "o", label="brute force")
        ax.set_xlabel("n")
        ax.set_ylabel("nearest distance")
        ax.set_title(f"chain, {mode} mode")
        ax.set_xticks(ns)
        ax.legend()
        ax.grid(True, alpha=0.3)
    return _finish(fig, outdir, "chain_verify.png")


def save_conjecture_figure(reports, outdir) -> Path:
    """Satisfied counts for the single-edge nearest-witness check."""
    labels = [f"{r.mode} n={r.n}" for r in reports]
    totals = [r.total for r in reports]
    sats = [r.satisfied for r in reports]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    xs = range(len(reports))
    ax.bar(xs, totals, color="lightgray", label="total")
    ax.bar(xs, sats, color="tab:blue", label="single-edge witness found")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels)
    ax.set_ylabel("graphs / MECs")
    ax.set_title("nearest witness within one edge operation")
    ax.legend()
    return _finish(fig, outdir, "single_edge_conjecture.png")
