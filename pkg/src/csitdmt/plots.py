"""Matplotlib rendering of tradeoff curves and outage sweeps to image files."""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_X_LABEL = {
    "dmt": "multiplexing gain r",
    "rdt": "rate R (bits/channel use)",
    "baseline": "r or R",
}


def render_curves(curves, path, title=""):
    """One figure with all curves overlaid; infinite diversity drawn as
    up-arrow markers pinned to the top of the axes."""
    fig, ax = plt.subplots(figsize=(7, 5))
    finite_max = 1.0
    for c in curves:
        finite = [d for _, d in c.points if math.isfinite(d)]
        if finite:
            finite_max = max(finite_max, max(finite))
    top = finite_max * 1.08
    for c in curves:
        xs = [x for x, d in c.points if math.isfinite(d)]
        ds = [d for _, d in c.points if math.isfinite(d)]
        (line,) = ax.plot(xs, ds, label=c.label or c.kind)
        inf_x = [x for x, d in c.points if math.isinf(d)]
        if inf_x:
            ax.plot(inf_x, [top] * len(inf_x), "^", color=line.get_color(),
                    clip_on=False)
    ax.set_xlabel(_X_LABEL.get(curves[0].kind.split("-")[0], "x") if curves else "x")
    ax.set_ylabel("outage diversity d")
    ax.set_ylim(bottom=0, top=top * 1.02)
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_outage(estimates_by_curve, path, title=""):
    """log-log outage probability against SNR."""
    fig, ax = plt.subplots(figsize=(7, 5))
    for label, ests in estimates_by_curve.items():
        xs = [e.P for e in ests if e.p_out > 0]
        ys = [e.p_out for e in ests if e.p_out > 0]
        ax.loglog(xs, ys, "o-", label=label)
    ax.set_xlabel("SNR P (linear)")
    ax.set_ylabel("outage probability")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
