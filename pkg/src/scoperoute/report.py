"""Bench figures, rendered off-screen to image files."""
from __future__ import annotations

import statistics

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

EFFORT_BOUND = 3.0


def bench_figure(rows: list, path, title: str | None = None) -> str:
    """Two panels per bench run: settled counts and per-query effort ratio.

    ``rows`` are bench records with ``query``, ``static_settled``,
    ``dynamic_settled`` and ``ratio`` keys. Returns the path written.
    """
    fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4))
    static = [r["static_settled"] for r in rows]
    dynamic = [r["dynamic_settled"] for r in rows]
    ratios = [r["ratio"] for r in rows]
    queries = [r["query"] for r in rows]

    left.scatter(static, dynamic, s=14, color="tab:blue")
    if static:
        hi = max(max(static), max(dynamic)) * 1.05
        left.plot([0, hi], [0, hi], color="grey", lw=0.8, label="equal effort")
        left.plot([0, hi], [0, EFFORT_BOUND * hi], color="tab:red", lw=0.8, ls="--",
                  label=f"{EFFORT_BOUND:g}x bound")
        left.set_xlim(0, hi)
        left.set_ylim(0, hi * 1.2)
        left.legend(frameon=False, fontsize=8)
    left.set_xlabel("static settled")
    left.set_ylabel("dynamic settled (all branches)")

    right.bar(queries, ratios, color="tab:blue", width=0.8)
    right.axhline(EFFORT_BOUND, color="tab:red", lw=0.8, ls="--")
    if ratios:
        med = statistics.median(ratios)
        right.axhline(med, color="black", lw=0.8, label=f"median {med:.3f}")
        right.legend(frameon=False, fontsize=8)
    right.set_xlabel("query")
    right.set_ylabel("dynamic / static settled")
    right.set_ylim(0, max([EFFORT_BOUND] + ratios) * 1.1)

    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return str(path)
