"""Matplotlib figures for the CLI report paths.

Every helper returns a Figure; ``save_figure`` writes it to disk. The Agg
backend is forced so the renderers work headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .bratteli import Diagram
from .fock import GramBlock

_FIGSIZE = (7.0, 4.3)


def save_figure(fig, path) -> None:
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def gram_heatmap(block: GramBlock) -> "plt.Figure":
    fig, ax = plt.subplots(figsize=(5.0, 4.2))
    image = ax.imshow(np.abs(block.gram), cmap="viridis", vmin=0.0)
    ax.set_title(f"|Gram| for v = {block.v} (dim {block.dim})")
    ax.set_xlabel("basis word")
    ax.set_ylabel("basis word")
    fig.colorbar(image, ax=ax, shrink=0.85)
    return fig


def residual_bars(labels: list[str], residuals: list[float], tol: float, title: str) -> "plt.Figure":
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    positions = np.arange(len(labels))
    # log-scale bars; exact zeros are clipped to the plot floor
    floor = 1e-18
    values = [max(r, floor) for r in residuals]
    ax.bar(positions, values, color="#4878d0")
    ax.axhline(tol, color="#d65f5f", linestyle="--", label=f"tolerance {tol:.0e}")
    ax.set_yscale("log")
    ax.set_xticks(positions)
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("residual norm")
    ax.set_title(title)
    ax.legend(loc="upper right")
    return fig


def bratteli_figure(diagram: Diagram) -> "plt.Figure":
    levels = sorted({level for level, _, _ in diagram.nodes})
    fig, ax = plt.subplots(figsize=(7.5, 1.8 * len(levels)))
    coords = {}
    for level in levels:
        row = [(v, dim) for lvl, v, dim in diagram.nodes if lvl == level]
        for idx, (v, dim) in enumerate(row):
            x = idx - (len(row) - 1) / 2.0
            y = -level
            coords[(level, v)] = (x, y)
    for edge in diagram.edges:
        x0, y0 = coords[(edge.k, edge.v)]
        x1, y1 = coords[(edge.k + 1, edge.u)]
        ax.plot([x0, x1], [y0, y1], color="#888888", lw=1.0, zorder=1)
        if edge.m > 1:
            ax.text((x0 + x1) / 2.0, (y0 + y1) / 2.0, str(edge.m),
                    fontsize=8, color="#d65f5f", ha="center", va="center", zorder=3)
    for (level, v), (x, y) in coords.items():
        dim = next(d for lvl, vv, d in diagram.nodes if lvl == level and vv == v)
        ax.scatter([x], [y], s=420, color="#eaeff7", edgecolor="#4878d0", zorder=2)
        ax.text(x, y, str(dim), ha="center", va="center", fontsize=9, zorder=4)
        ax.annotate(str(v), (x, y), textcoords="offset points", xytext=(0, -18),
                    ha="center", fontsize=7, color="#555555")
    for level in levels:
        y = -level
        ax.text(ax.get_xlim()[0], y, f"k={level}", fontsize=9, va="center")
    ax.set_axis_off()
    ax.set_title(f"embedding diagram, n={diagram.n}, levels 1..{diagram.k_max + 1}")
    return fig


def spectrum_figure(eigenvalues: list[float], threshold: float) -> "plt.Figure":
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    values = np.sort(np.asarray(eigenvalues))
    floor = 1e-18
    ax.plot(np.arange(len(values)), np.maximum(values, floor), "o", markersize=3, color="#4878d0")
    ax.axhline(threshold, color="#d65f5f", linestyle="--", label=f"support threshold {threshold:.0e}")
    ax.set_yscale("log")
    ax.set_xlabel("eigenvalue index")
    ax.set_ylabel("eigenvalue")
    ax.set_title("spectrum of the summed range projections")
    ax.legend(loc="lower right")
    return fig


def block_dims_figure(labels: list[str], dims: list[int], title: str) -> "plt.Figure":
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    positions = np.arange(len(labels))
    ax.bar(positions, dims, color="#6acc64")
    ax.set_xticks(positions)
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("matrix block dimension")
    ax.set_title(title)
    return fig


def acceptance_figure(names: list[str], elapsed: list[float], limits: list[float],
                      passed: list[bool]) -> "plt.Figure":
    fig, ax = plt.subplots(figsize=(7.5, 4.5))
    positions = np.arange(len(names))
    colors = ["#6acc64" if ok else "#d65f5f" for ok in passed]
    ax.barh(positions, elapsed, color=colors)
    for pos, limit in zip(positions, limits):
        ax.plot([limit, limit], [pos - 0.4, pos + 0.4], color="#333333", lw=1.2)
    ax.set_yticks(positions)
    ax.set_yticklabels(names, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("elapsed seconds (tick = budget)")
    ax.set_title("acceptance checks")
    return fig
