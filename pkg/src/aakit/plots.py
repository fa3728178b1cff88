"""Matplotlib figures rendered by the CLI report paths.

Imported lazily so plain CLI runs don't pay the matplotlib import cost.
The hull overlay itself is hand-written SVG (see :mod:`aakit.io`); these
figures are the curve summaries written alongside the delimited output.
"""

from __future__ import annotations


def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    return plt


def save_accuracy_curve(ks, ratios, path) -> None:
    """Relative accuracy of greedy vertex placement versus the optimum."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    ax.plot(ks, ratios, marker="o", markersize=3, color="#1b6ca8")
    ax.axhline(0.9, color="#d1495b", linestyle="--", linewidth=1.0, label="90%")
    ax.set_xlabel("number of archetypes k")
    ax.set_ylabel("relative accuracy k/(k+1)")
    ax.set_ylim(0.0, 1.05)
    ax.legend(loc="lower right")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_rss_curve(ks, rss_values, path) -> None:
    """Residual versus archetype count for a nested demo sweep."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    ax.plot(ks, rss_values, marker="o", markersize=4, color="#2e4057")
    ax.set_xlabel("number of archetypes k")
    ax.set_ylabel("residual sum of squares")
    ax.set_yscale("log")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
