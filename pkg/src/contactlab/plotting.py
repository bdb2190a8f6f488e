"""Figures for the command-line reports (Agg backend, reproducible PNGs)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .curves import unwrap  # noqa: E402

# strip the version stamp so identical inputs give identical files
_META = {"Software": None}

STYLE = {
    "figure.dpi": 100,
    "savefig.dpi": 120,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.0,
}


def _save(fig, path) -> Path:
    path = Path(path)
    fig.savefig(path, metadata=_META)
    plt.close(fig)
    return path


def plot_curve(curve, path, title: str = "", chords=None) -> Path:
    """Lagrangian projection (left) and height profile (right).

    Chord endpoints in the plane are marked when a report is given.
    """
    c = unwrap(curve)
    t, P = c.polyline()
    with plt.rc_context(STYLE):
        ncols = 2 if c.dim == 3 else 1
        fig, axes = plt.subplots(1, ncols, figsize=(4.2 * ncols, 3.8), squeeze=False)
        ax = axes[0, 0]
        ax.plot(P[:, 0], P[:, 1], color="C0")
        ax.set_aspect("equal", adjustable="datalim")
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        ax.set_title("projection")
        if chords is not None and chords.count:
            pts = np.array([ch.planar_point for ch in chords.chords])
            ax.plot(pts[:, 0], pts[:, 1], "o", ms=2.5, color="C3", label=f"{chords.count} chords")
            ax.legend(loc="best", fontsize=7)
        if c.dim == 3:
            ax = axes[0, 1]
            ax.plot(t, P[:, 2], color="C1")
            ax.set_xlabel("t")
            ax.set_ylabel("z")
            ax.set_title("height")
        if title:
            fig.suptitle(title)
        fig.tight_layout()
        return _save(fig, path)


def plot_obstruction(rows, path) -> Path:
    """Chord count and total chord length against epsilon (log scales)."""
    eps = np.array([r["epsilon"] for r in rows], float)
    count = np.array([r["chord_count"] for r in rows], float)
    total = np.array([r["total_len"] for r in rows], float)
    defect = np.array([10 * r["C"] for r in rows], float)
    with plt.rc_context(STYLE):
        fig, (a, b) = plt.subplots(1, 2, figsize=(8.4, 3.6))
        a.loglog(eps, np.maximum(count, 0.5), "o-")
        a.loglog(eps, (eps / eps[0]) ** -2 * max(count[0], 1), "--", color="0.5", label=r"$\propto \epsilon^{-2}$")
        a.set_xlabel(r"$\epsilon$")
        a.set_ylabel("chord count")
        a.legend(fontsize=7)
        b.semilogx(eps, total, "o-", label="total chord length")
        if np.any(defect > 0):
            b.semilogx(eps, defect, "--", color="0.5", label="|total defect|")
        b.set_xlabel(r"$\epsilon$")
        b.legend(fontsize=7)
        fig.tight_layout()
        return _save(fig, path)


def plot_traces(base, images, labels, path, title: str = "") -> Path:
    """Planar traces of a curve and of its images under a flow."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.4, 4.2))
        _, P = unwrap(base).polyline()
        ax.plot(P[:, 0], P[:, 1], color="k", label="L")
        for k, (img, lab) in enumerate(zip(images, labels)):
            _, Q = unwrap(img).polyline()
            ax.plot(Q[:, 0], Q[:, 1], color=f"C{k % 10}", label=lab)
        ax.set_aspect("equal", adjustable="datalim")
        ax.legend(fontsize=7)
        if title:
            ax.set_title(title)
        fig.tight_layout()
        return _save(fig, path)


def plot_series(x, ys: dict, path, xlabel: str, ylabel: str = "", logx=False, logy=False, title: str = "") -> Path:
    """Generic line plot used for flows and norm sweeps."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.6, 3.4))
        for k, (lab, y) in enumerate(ys.items()):
            ax.plot(x, y, "o-", ms=3, color=f"C{k}", label=lab)
        if logx:
            ax.set_xscale("log")
        if logy:
            ax.set_yscale("log")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        ax.legend(fontsize=7)
        fig.tight_layout()
        return _save(fig, path)
