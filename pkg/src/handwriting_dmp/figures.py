"""Matplotlib figures written next to the CSV/JSON outputs."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .svg import DEMO_COLOR, REPRO_COLOR  # noqa: E402

# fixed metadata and hash salt keep repeated saves byte-identical
_RC = {"svg.hashsalt": "handwriting-dmp", "font.size": 10, "axes.labelsize": 10,
       "legend.fontsize": 8, "xtick.labelsize": 8, "ytick.labelsize": 8}


def _metadata(path: str):
    suffix = str(path).rsplit(".", 1)[-1].lower()
    if suffix == "svg":
        return {"Date": None, "Creator": None}
    if suffix == "pdf":
        return {"CreationDate": None, "ModDate": None, "Creator": None, "Producer": None}
    return {"Software": None}


def save(fig, path) -> None:
    fig.savefig(path, metadata=_metadata(path))
    plt.close(fig)


def report_figure(report, path, width: float = 5.0, height: float = 3.5) -> None:
    """Error against the swept value, one line per letter, log-log axes."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(width, height), dpi=120)
        for name in report.letters:
            ax.plot(report.axis, report.column(name), marker="o", ms=3, label=name)
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("kernel width (x 1/N)" if report.axis_name == "width_factor"
                      else "kernel number N")
        ax.set_ylabel("mean euclidean error [m]")
        ax.legend(frameon=False)
        fig.tight_layout()
        save(fig, path)


def trajectory_figure(curves, labels, path, width: float = 4.0, height: float = 4.0) -> None:
    """Overlay of planar trajectories; the first is drawn as the demonstration."""
    colors = [DEMO_COLOR, REPRO_COLOR, "#ff7f0e", "#2ca02c", "#9467bd"]
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(width, height), dpi=120)
        for k, (c, lab) in enumerate(zip(curves, labels)):
            a = np.asarray(getattr(c, "positions", c), dtype=float)
            if a.ndim == 1 or a.shape[1] == 1:
                ax.plot(np.arange(len(a)), a.reshape(len(a), -1)[:, 0], color=colors[k % 5], label=lab)
            else:
                ax.plot(a[:, 0], a[:, 1], color=colors[k % 5], label=lab)
                ax.set_aspect("equal", adjustable="datalim")
        ax.legend(frameon=False)
        fig.tight_layout()
        save(fig, path)
