"""SVG figures regenerated from the summary tables."""

from __future__ import annotations

import math
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_SVG = {"format": "svg", "metadata": {"Date": None}}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, **_SVG)
    plt.close(fig)


def plot_scaling(summary_rows, success_rows, path):
    """Mean iterations at best against N_d, and the syndrome success rate."""
    fig, (ax, bx) = plt.subplots(1, 2, figsize=(10, 4))
    series = defaultdict(list)
    for method, p, d, n, _, mean, se in summary_rows:
        series[(method, p)].append((n, mean, 0.0 if math.isnan(se) else se))
    for (method, p), pts in sorted(series.items()):
        n, m, e = zip(*sorted(pts))
        ax.errorbar(n, m, yerr=e, marker="o", ms=3, capsize=2, label=f"{method} p={p:g}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("data qubits N_d")
    ax.set_ylabel("iterations at best")
    ax.legend(fontsize=7)
    ok = defaultdict(list)
    for method, p, n, frac in success_rows:
        ok[(method, p)].append((n, 100.0 * frac))
    for (method, p), pts in sorted(ok.items()):
        n, f = zip(*sorted(pts))
        bx.plot(n, f, marker="s", ms=3, label=f"{method} p={p:g}")
    bx.set_xscale("log")
    bx.set_ylim(0, 105)
    bx.set_xlabel("data qubits N_d")
    bx.set_ylabel("syndrome satisfied (%)")
    _save(fig, path)


def plot_threshold(rate_rows, path, bracket=None):
    methods = sorted({r[0] for r in rate_rows})
    fig, axes = plt.subplots(1, len(methods), figsize=(5 * len(methods), 4), squeeze=False)
    for ax, method in zip(axes[0], methods):
        curves = defaultdict(list)
        for m, d, p, _, _, P, se in rate_rows:
            if m == method:
                curves[d].append((100 * p, P, se))
        for d, pts in sorted(curves.items()):
            p, P, se = zip(*sorted(pts))
            ax.errorbar(p, P, yerr=se, marker="o", ms=3, capsize=2, label=f"d={d}")
        if bracket and bracket.get(method):
            lo, hi = bracket[method]
            ax.axvspan(100 * lo, 100 * hi, color="0.85", zorder=0)
        ax.set_title(method)
        ax.set_xlabel("physical error rate p (%)")
        ax.set_ylabel("logical error rate P_L")
        ax.legend(fontsize=7)
    _save(fig, path)


def plot_ground(ground_rows, path):
    """Ground-state proxy fraction and iterations split by outcome."""
    fig, (ax, bx) = plt.subplots(1, 2, figsize=(10, 4))
    frac = defaultdict(list)
    for method, d, p, _, f, se, g, e in ground_rows:
        frac[(method, p)].append((d, 100 * f, 100 * se, g, e))
    for (method, p), pts in sorted(frac.items()):
        pts.sort()
        ds = [x[0] for x in pts]
        ax.errorbar(ds, [x[1] for x in pts], yerr=[x[2] for x in pts], marker="o", ms=3, capsize=2,
                    label=f"{method} p={p:g}")
        if method != "mwpm":
            bx.plot(ds, [x[3] for x in pts], marker="o", ms=3, label=f"ground p={p:g}")
            bx.plot(ds, [x[4] for x in pts], marker="x", ms=4, ls="--", label=f"excited p={p:g}")
    ax.set_ylim(0, 105)
    ax.set_xlabel("code distance d")
    ax.set_ylabel("ground-state proxy (%)")
    ax.legend(fontsize=7)
    bx.set_yscale("log")
    bx.set_xlabel("code distance d")
    bx.set_ylabel("mean iterations at best")
    bx.legend(fontsize=7)
    _save(fig, path)


def plot_demo(lat, actual, estimate, path):
    """Lattice with actual errors (circles) and the decoded estimate (crosses)."""
    fig, ax = plt.subplots(figsize=(7, 7))
    xy = lat.coords
    ax.scatter([c[1] for c in xy], [-c[0] for c in xy], s=2, c="0.8")
    a = [xy[q] for q in range(lat.n_data) if actual[q]]
    e = [xy[q] for q in range(lat.n_data) if estimate[q]]
    ax.scatter([c[1] for c in a], [-c[0] for c in a], s=30, facecolors="none", edgecolors="tab:red", label="actual")
    ax.scatter([c[1] for c in e], [-c[0] for c in e], s=20, marker="x", c="tab:blue", label="estimate")
    ax.set_aspect("equal")
    ax.set_axis_off()
    ax.legend(loc="upper right", fontsize=8)
    _save(fig, path)
