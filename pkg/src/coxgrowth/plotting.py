"""Figures for the analyze report (matplotlib, file output only)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# Keep PNG bytes free of version/date stamps.
_META = {"Software": None}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_META)
    plt.close(fig)
    return path


def plot_counts(w, g, path):
    """w_k and g_k on a log scale."""
    ks = [k for k in range(len(w)) if w[k] > 0]
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    ax.semilogy(ks, [w[k] for k in ks], "o-", ms=3, label="$w_k$ (elements)")
    ax.semilogy(ks, [g[k] for k in ks], "s--", ms=3, label="$g_k$ (geodesics)")
    ax.set_xlabel("length $k$")
    ax.set_ylabel("count")
    ax.legend(frameon=False)
    ax.grid(True, which="major", alpha=0.3)
    return _save(fig, path)


def plot_ratios(ratios, path):
    """r_k = g_k / (delta^k w_k) against the reference line 1."""
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    ax.plot(range(len(ratios)), [float(r) for r in ratios], "o-", ms=3)
    ax.axhline(1.0, color="grey", lw=0.8, ls=":")
    ax.set_xlabel("length $k$")
    ax.set_ylabel(r"$g_k / (\hat\delta^k w_k)$")
    ax.grid(True, alpha=0.3)
    return _save(fig, path)


def write_figures(analysis, directory, stem="analysis"):
    """Write the report figures into ``directory``; returns the written paths."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    r = analysis.report
    paths = [plot_counts(r.w, r.g, out / f"{stem}_counts.png")]
    if r.delta is not None:
        paths.append(plot_ratios(r.delta.ratios, out / f"{stem}_ratios.png"))
    return paths
