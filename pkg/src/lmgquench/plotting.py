"""Optional figure emission from result bundles.

Purely presentational: each style renders the columns a command already
wrote, never recomputing anything.  matplotlib is imported lazily so the
compute library stays free of presentation dependencies.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .output import ResultBundle

__all__ = ["emit_figure"]


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def _column(bundle: ResultBundle, index: int, drop_empty: bool = False) -> np.ndarray:
    vals = [row[index] for row in bundle.rows]
    if drop_empty:
        vals = [v for v in vals if v is not None]
    return np.asarray(vals, dtype=float)


def emit_figure(bundle: ResultBundle, path: Path, style: str | None = None) -> Path:
    """Render a bundle to a self-contained vector graphic (SVG).

    ``style`` defaults to the bundle's own command; passing a different
    style raises unless the bundle carries that style's columns.
    """
    style = style or bundle.command
    renderer = _RENDERERS.get(style)
    if renderer is None:
        raise ValueError(f"no figure style named {style!r}")
    plt = _pyplot()
    fig = renderer(plt, bundle)
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path


def _expect(bundle: ResultBundle, *prefixes: str) -> None:
    for k, prefix in enumerate(prefixes):
        if k >= len(bundle.columns) or not bundle.columns[k].startswith(prefix):
            raise ValueError(
                f"bundle columns {bundle.columns!r} do not match style "
                f"{bundle.command!r} (expected {prefixes!r})")


def _fig_spectrum(plt, bundle):
    _expect(bundle, "k", "E_k", "parity")
    fig, ax = plt.subplots(figsize=(5, 3.4))
    k = _column(bundle, 0)
    e = _column(bundle, 1)
    par = _column(bundle, 2)
    ax.plot(k[par > 0], e[par > 0], "o", ms=3, label="even")
    ax.plot(k[par < 0], e[par < 0], "s", ms=3, label="odd")
    ax.set_xlabel("k")
    ax.set_ylabel(r"$E_k$")
    ax.legend(frameon=False)
    fig.tight_layout()
    return fig


def _fig_gap(plt, bundle):
    _expect(bundle, "h")
    fig, ax = plt.subplots(figsize=(5, 3.4))
    h = _column(bundle, 0)
    for k in range(1, len(bundle.columns)):
        ax.plot(h, _column(bundle, k), label=bundle.columns[k])
    ax.set_xlabel("h")
    ax.set_ylabel(r"$E_k - E_0$")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    return fig


def _fig_curvature(plt, bundle):
    _expect(bundle, "h", "d2e")
    fig, ax = plt.subplots(figsize=(5, 3.4))
    ax.plot(_column(bundle, 0), _column(bundle, 1))
    ax.set_xlabel("h")
    ax.set_ylabel(r"$d^2(E_0/N)/dh^2$")
    fig.tight_layout()
    return fig


def _fig_tdf(plt, bundle):
    _expect(bundle, "t")
    fig, ax = plt.subplots(figsize=(5, 3.4))
    t = _column(bundle, 0)
    for k in range(1, len(bundle.columns)):
        ax.plot(t, _column(bundle, k), label=bundle.columns[k])
    ax.set_xlabel("t")
    ax.set_ylabel(r"$\mathcal{L}(t)$")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    return fig


def _fig_lmin(plt, bundle):
    _expect(bundle, "h_f", "L_min")
    fig, ax = plt.subplots(figsize=(5, 3.4))
    ax.plot(_column(bundle, 0), _column(bundle, 1))
    ax.set_xlabel(r"$h_f$")
    ax.set_ylabel(r"$\mathcal{L}_{\min}$")
    fig.tight_layout()
    return fig


def _fig_scaling(plt, bundle):
    _expect(bundle, "N", "h0")
    fig, ax = plt.subplots(figsize=(5, 3.4))
    n = _column(bundle, 0)
    h0 = _column(bundle, 1)
    x = 1.0 / n
    ax.plot(x, h0, "o", label=r"$h_0(N)$")
    fit = (bundle.sidecar or {}).get("fit")
    if fit:
        xs = np.linspace(0.0, x.max() * 1.05, 200)
        ax.plot(xs, fit["a"] + fit["b"] * xs + fit["c"] * xs**2, "-",
                label="quadratic fit")
        ax.plot([0.0], [fit["a"]], "x", ms=8, label=r"$N\to\infty$")
    ax.set_xlabel("1/N")
    ax.set_ylabel(r"$h_0$")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    return fig


def _fig_work(plt, bundle):
    _expect(bundle, "h_f", "W", "dF", "W_irr")
    fig, axes = plt.subplots(3, 1, figsize=(5, 8), sharex=True)
    h = _column(bundle, 0)
    labels = (r"$\langle W\rangle$", r"$\Delta F$", r"$\langle W_{irr}\rangle$")
    for panel, (col, lab) in enumerate(zip((1, 2, 3), labels)):
        axes[panel].plot(h, _column(bundle, col), "k-")
        axes[panel].set_ylabel(lab)
        if panel > 0:  # derivative insets for dF and W_irr
            inset = axes[panel].inset_axes([0.55, 0.15, 0.4, 0.4])
            inset.plot(h[1:-1], _column(bundle, col + 3, drop_empty=True), "r-")
            inset.set_title(bundle.columns[col + 3], fontsize=7)
            inset.tick_params(labelsize=6)
    axes[-1].set_xlabel(r"$h_f$")
    fig.tight_layout()
    return fig


def _fig_spectral(plt, bundle):
    _expect(bundle, "omega")
    fig, ax = plt.subplots(figsize=(5, 3.4))
    w = _column(bundle, 0)
    for k in range(1, len(bundle.columns)):
        ax.plot(w, _column(bundle, k), label=bundle.columns[k])
    ax.set_xlabel(r"$\omega$")
    ax.set_ylabel(r"$A(\omega)$")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    return fig


_RENDERERS = {
    "spectrum": _fig_spectrum,
    "gap": _fig_gap,
    "curvature": _fig_curvature,
    "tdf": _fig_tdf,
    "lmin-scan": _fig_lmin,
    "h0-scaling": _fig_scaling,
    "work-sweep": _fig_work,
    "spectral": _fig_spectral,
}
