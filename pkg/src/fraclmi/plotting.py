"""Matplotlib figures written next to the CSV plot data."""

import math

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["figure_size", "sweep_figure", "eigenvalue_figure", "save_figure"]

_RC = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.grid": True,
    "grid.alpha": 0.3,
}


def figure_size(scale=1.0, width_in=5.0):
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    return (width_in * scale, width_in * scale * golden)


def sweep_figure(sweep, delta=None, title=None):
    """Largest singular value against frequency on a log axis."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=figure_size())
        w, s = np.asarray(sweep.omegas), np.asarray(sweep.sigmas)
        pos = w > 0
        ax.semilogx(w[pos], s[pos], lw=1.2, label=r"$\sigma_{\max}(G(j\omega))$")
        if sweep.peak_omega > 0:
            ax.plot([sweep.peak_omega], [sweep.peak_sigma], "o", ms=4,
                    label=f"peak {sweep.peak_sigma:.4g}")
        if delta is not None:
            ax.axhline(delta, color="k", ls="--", lw=0.8, label=rf"$\delta$ = {delta:g}")
        ax.set_xlabel(r"$\omega$ (rad/s)")
        ax.set_ylabel("max singular value")
        if title:
            ax.set_title(title)
        ax.legend(loc="best")
        fig.tight_layout()
    return fig


def eigenvalue_figure(report, nu, title=None):
    """Eigenvalues of ``A`` with the stability boundary ``|arg| = nu*pi/2``."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(4.0, 4.0))
        lam = np.array(report.eigenvalues, dtype=complex)
        r = max(1.0, 1.2 * float(np.max(np.abs(lam)))) if lam.size else 1.0
        edge = 0.5 * math.pi * nu
        for sgn in (1, -1):
            ax.plot([0, r * math.cos(edge)], [0, sgn * r * math.sin(edge)], "k--", lw=0.8)
        ax.plot(lam.real, lam.imag, "x", ms=7, mew=1.5, label="eigenvalues of A")
        ax.axhline(0, color="0.5", lw=0.5)
        ax.axvline(0, color="0.5", lw=0.5)
        ax.set_xlim(-r, r)
        ax.set_ylim(-r, r)
        ax.set_aspect("equal")
        ax.set_xlabel("Re")
        ax.set_ylabel("Im")
        ax.set_title(title or ("stable" if report.stable else "unstable"))
        ax.legend(loc="best")
        fig.tight_layout()
    return fig


def save_figure(fig, path, dpi=150):
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
    return path
