"""Figure rendering for the report paths: training curves and lab traces.

Figures are written next to the delimited output with the same stem; the
CSV stays the canonical artifact.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_training_curves(log, path, eps1=None, eps2=None, title=None):
    """Two panels: loss curves on top, ratio trace with the trust band below."""
    iterations = [rec.iteration for rec in log]
    train_loss = [rec.train_loss for rec in log]
    val_metric = [rec.val_metric for rec in log]
    rhos = [rec.rho for rec in log]
    admitted = [rec.admitted for rec in log]

    fig, (ax_loss, ax_rho) = plt.subplots(
        2, 1, figsize=(7.0, 6.0), sharex=True, height_ratios=[2, 1]
    )
    ax_loss.plot(iterations, train_loss, color="tab:red", label="train loss")
    if any(v is not None for v in val_metric):
        ax_loss.plot(
            iterations,
            [np.nan if v is None else v for v in val_metric],
            color="tab:blue",
            label="validation loss",
        )
    ax_loss.set_yscale("log")
    ax_loss.set_ylabel("mean loss")
    ax_loss.legend(loc="best", fontsize=9)
    if title:
        ax_loss.set_title(title)

    if any(r is not None for r in rhos):
        rho_vals = np.array([np.nan if r is None else r for r in rhos])
        colors = ["tab:green" if a else "tab:gray" for a in admitted]
        ax_rho.scatter(iterations, rho_vals, c=colors, s=12)
        for level, style in ((eps1, "--"), (eps2, "--"), (1.0, ":")):
            if level is not None:
                ax_rho.axhline(level, color="black", linestyle=style, linewidth=0.8)
    ax_rho.set_ylabel("ratio")
    ax_rho.set_xlabel("iteration")

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_trace(losses, path, title=None):
    """Single semilog loss trace for the one-instance lab."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.semilogy(range(len(losses)), losses, marker="o", markersize=3, color="tab:red")
    ax.set_xlabel("iteration")
    ax.set_ylabel("loss")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
