"""Matplotlib renderings for the CLI: weight profiles and report error charts."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def weight_plot(xs, curves: dict, path, xlabel: str = "y", title: str = "") -> None:
    """Line plot of one or more weight profiles; curves maps label -> values."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label, values in curves.items():
        ax.plot(xs, values, label=label, lw=1.4)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("density")
    if title:
        ax.set_title(title)
    if len(curves) > 1:
        ax.legend(frameon=False)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def report_plot(reports, path) -> None:
    """Horizontal bar chart of relative errors against their tolerances."""
    reports = sorted(reports, key=lambda r: r.id)
    names = [r.id for r in reports]
    # floor keeps exactly-zero errors visible on the log axis
    errs = [max(r.rel_err, 1e-17) for r in reports]
    tols = [r.tol for r in reports]
    colors = ["tab:blue" if r.passed else "tab:red" for r in reports]
    height = max(3.0, 0.22 * len(names) + 1.2)
    fig, ax = plt.subplots(figsize=(9, height))
    ypos = range(len(names))
    ax.barh(ypos, errs, color=colors, alpha=0.8)
    ax.scatter(tols, ypos, marker="|", s=80, color="black", zorder=3,
               label="tolerance")
    ax.set_xscale("log")
    ax.set_yticks(list(ypos))
    ax.set_yticklabels(names, fontsize=6)
    ax.invert_yaxis()
    ax.set_xlabel("relative error")
    ax.legend(frameon=False, loc="lower right")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
