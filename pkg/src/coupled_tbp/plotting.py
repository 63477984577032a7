"""SVG figures for the command line tool. Presentation only."""

from pathlib import Path

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "coupled-tbp"
    import matplotlib.pyplot as plt

    return plt


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    import matplotlib.pyplot as plt

    plt.close(fig)
    return path


def plot_sweeps(path, sweeps):
    """``sweeps`` maps a label ("Case 1") to a list of sweep rows."""
    plt = _pyplot()
    fig, axes = plt.subplots(3, 1, sharex=True, figsize=(6, 7))
    for label, rows in sweeps.items():
        g = np.array([r.gamma for r in rows])
        for ax, key in zip(axes, ("bandwidth", "storage_time", "tbp")):
            ax.semilogx(g, [getattr(r, key) for r in rows], label=label)
    for ax, name in zip(axes, ("bandwidth", "storage time", "TBP")):
        ax.set_ylabel(name)
        ax.axvline(2.0, ls="--", lw=0.8, color="gray")
    axes[2].axhline(1.0, ls=":", color="k", lw=0.8)
    axes[2].set_xlabel("gamma")
    axes[0].legend()
    return _save(fig, path)


def plot_xy(path, x, ys, xlabel, ylabel, logx=False, logy=False, vlines=()):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, y in ys.items():
        ax.plot(x, y, label=label)
    for xv in vlines:
        ax.axvline(xv, ls="--", lw=0.8, color="gray")
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend()
    return _save(fig, path)
