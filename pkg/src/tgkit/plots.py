"""Report figures rendered to files next to the delimited output."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .tokenmeter import GRAPH_FORMATS

_FORMAT_COLORS = {
    "llm4tg": "tab:blue",
    "graphml": "tab:red",
    "gexf": "tab:orange",
    "gml": "tab:green",
}


def token_consumption_plot(reports, budgets, out_path) -> None:
    """Tokens per format against graph size, with model budget lines."""
    reports = sorted(reports, key=lambda r: r.node_count)
    xs = [r.node_count for r in reports]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for fmt in GRAPH_FORMATS:
        ax.plot(xs, [r.counts[fmt] for r in reports], marker="o", markersize=3,
                label=fmt, color=_FORMAT_COLORS[fmt])
    for budget in budgets:
        ax.axhline(budget.limit, linestyle="--", linewidth=0.8, color="gray")
        ax.annotate(f"{budget.model} ({budget.limit:,})",
                    xy=(0.01, budget.limit), xycoords=("axes fraction", "data"),
                    fontsize=7, va="bottom", color="gray")
    ax.set_xlabel("nodes")
    ax.set_ylabel("tokens")
    ax.set_yscale("log")
    ax.legend(fontsize=8)
    ax.grid(True, which="both", linestyle=":", linewidth=0.4)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def summary_plot(rows, out_path, title="") -> None:
    """Bar chart of a (metric, ..., value-in-last-column) summary table."""
    body = [r for r in rows[1:] if isinstance(r[-1], (int, float))]
    names = [str(r[0]) for r in body]
    values = [float(r[-1]) for r in body]
    fig, ax = plt.subplots(figsize=(max(5, 0.45 * len(names) + 2), 4))
    ax.bar(range(len(names)), values, color="tab:blue")
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=45, ha="right", fontsize=7)
    ax.set_ylabel("value")
    if title:
        ax.set_title(title)
    ax.grid(True, axis="y", linestyle=":", linewidth=0.4)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
