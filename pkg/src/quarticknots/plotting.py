"""Vector figures of cells, relation curves and fiber diagrams.

All figures go through :func:`save` which pins the SVG hash salt and drops
the date so that output files are byte-stable for fixed inputs.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .cells import CellLabel, QuarticNormalForm, classify, critical_roots  # noqa: E402
from .conditions import lemma7_region_test  # noqa: E402
from .polyring import Poly  # noqa: E402
from .scanner import (D_POLY, D_THRESHOLDS, Target, breakpoints, family_member,  # noqa: E402
                      sweep_family)
from .symcurve import pair_from_pq, relation_curve  # noqa: E402

FIGURES = ("cells", "rcurves", "lemma7", "fibers", "dcell")


def save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with matplotlib.rc_context({"svg.hashsalt": "quarticknots", "svg.fonttype": "path"}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def curve_points(f: Poly, p_range: tuple[float, float], samples: int = 2001) -> list[np.ndarray]:
    """Real branches of r(f) as (t, s) polylines, split where they leave t <= s."""
    phi = relation_curve(f).phi
    branches: list[list[tuple[float, float]]] = []
    current: list[tuple[float, float]] = []
    for p in np.linspace(*p_range, samples):
        c = [float(v) for v in phi.specialize("p", float(p))]
        while c and c[-1] == 0:
            c.pop()
        q = None
        if len(c) == 2:
            q = -c[0] / c[1]
        if q is not None and p * p - 4 * q >= 0:
            current.append(pair_from_pq(float(p), q))
        elif current:
            branches.append(current)
            current = []
    if current:
        branches.append(current)
    return [np.array(b) for b in branches if len(b) > 1]


def figure_cells(box: float = 4.0):
    fig, ax = plt.subplots(figsize=(5, 5))
    a = np.linspace(-box, 0, 400)
    b = np.sqrt(-8 * a ** 3 / 27)
    ax.plot(a, b, color="k", lw=1.2, label="27b² + 8a³ = 0")
    ax.plot(a, -b, color="k", lw=1.2)
    ax.plot([-box, 0], [0, 0], color="tab:red", lw=1.5, label="D")
    ax.plot([0, box], [0, 0], color="tab:blue", lw=1.5, label="C")
    ax.plot([0], [0], "ko", ms=4)
    marks = {CellLabel.A: (1.5, 2.0), CellLabel.A_prime: (1.5, -2.0), CellLabel.B: (-3.0, 1.0),
             CellLabel.B_prime: (-3.0, -1.0), CellLabel.E: (-1.8, 2.6), CellLabel.E_prime: (-1.8, -2.6),
             CellLabel.C: (2.5, 0.2), CellLabel.D: (-1.0, 0.2), CellLabel.O: (0.1, 0.2)}
    for label, (x, y) in marks.items():
        ax.annotate(label.value, (x, y), fontsize=10)
    ax.set_xlim(-box, box)
    ax.set_ylim(-box, box)
    ax.set_xlabel("a")
    ax.set_ylabel("b")
    ax.set_title("cells of t⁴ + at² + bt")
    ax.legend(loc="lower right", fontsize=8)
    return fig


def figure_rcurves(a: float = -14.0, b: float = 24.0, nabla: float = 1.2, ellipses: int = 7):
    nf = QuarticNormalForm(0.0, a, b)
    f = nf.poly
    xs = critical_roots(nf).values
    span = 2 * (max(abs(x) for x in xs) + 1)
    fig, ax = plt.subplots(figsize=(5, 5))
    for k, br in enumerate(curve_points(f, (-4 * span, 4 * span), 4001)):
        ax.plot(br[:, 0], br[:, 1], color="k", lw=1.4, label="r(f)" if k == 0 else None)
    ax.plot([x for x in xs], [x for x in xs], "ko", ms=4)
    # ellipses of the family through each diagonal point, plus a few between
    betas = sorted({6 * nabla * x - 3 * x * x for x in xs})
    lo, hi = betas[0], betas[-1]
    betas = sorted(set(betas) | set(np.linspace(lo, hi, ellipses)))
    cmap = plt.get_cmap("viridis")
    for i, beta in enumerate(betas):
        for br in curve_points(family_member(nabla, float(beta)), (-2 * span, 2 * span), 1201):
            ax.plot(br[:, 0], br[:, 1], color=cmap(i / max(1, len(betas) - 1)), lw=0.8)
    lim = span
    ax.plot([-lim, lim], [-lim, lim], "k--", lw=0.8, label="t = s")
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    ax.set_aspect("equal")
    ax.set_xlabel("t")
    ax.set_ylabel("s")
    ax.set_title(f"r(f), f = t⁴ {a:+g}t² {b:+g}t; ellipses at ∇ = {nabla:g}")
    ax.legend(loc="lower right", fontsize=8)
    return fig


def figure_lemma7(samples: int = 241):
    A = np.linspace(0.0, 3.0, samples)
    bs = np.linspace(-2.5, 2.5, samples)
    inside = np.array([[lemma7_region_test(x - 2.0, y) for x in A] for y in bs], dtype=float)
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.contourf(A, bs, inside, levels=[0.5, 1.5], colors=["#cfe3f5"])
    ax.contour(A, bs, inside, levels=[0.5], colors=["tab:blue"], linewidths=1.2)
    bound = np.sqrt(4 * A ** 3 / 27)
    ax.plot(A, bound, "k--", lw=1.0, label="27b² = 4A³ (excluded)")
    ax.plot(A, -bound, "k--", lw=1.0)
    p0 = 2 / math.sqrt(3)
    for p in (p0, -p0):
        ax.plot(A, p ** 3 - p * A, color="tab:red", lw=0.8, label="p² = 4/3" if p > 0 else None)
    ax.set_xlim(A[0], A[-1])
    ax.set_ylim(bs[0], bs[-1])
    ax.set_xlabel("A = a + 2")
    ax.set_ylabel("b")
    ax.set_title("three roots of p³ − Ap − b with p² ≤ 4/3")
    ax.legend(loc="lower left", fontsize=8)
    return fig


def _run_segments(f: Poly, nablas, target: Target, resolution: int, mirror: bool = False):
    segs = []
    for x in nablas:
        sweep = sweep_family(f, float(x), resolution)
        for r in sweep.runs(target, mirror, merge_punctures=False):
            if math.isfinite(r.lo) and math.isfinite(r.hi):
                segs.append((float(x), r))
    return segs


def _draw_runs(ax, segs, color: str, label: str):
    first = True
    for x, r in segs:
        ax.plot([x, x], [r.lo, r.hi], color=color, lw=1.0, label=label if first else None)
        first = False
        for end, closed in ((r.lo, r.lo_closed), (r.hi, r.hi_closed)):
            ax.plot([x], [end], marker="o", ms=2.5, color=color,
                    markerfacecolor=color if closed else "white")


def figure_fibers(a: float = -14.0, b: float = 24.0, slices: int = 61, resolution: int = 64):
    nf = QuarticNormalForm(0.0, a, b)
    if classify(a, b) not in (CellLabel.B, CellLabel.B_prime):
        raise ValueError("fiber diagrams need a quartic in cell B or B'")
    mirror = b < 0
    bp = breakpoints(QuarticNormalForm(0.0, a, abs(b)))
    sign = -1 if mirror else 1
    f = nf.poly
    h = np.linspace(bp.tau - 0.1 * (bp.xi - bp.tau), bp.xi + 0.1 * (bp.xi - bp.tau), slices)
    d = np.linspace(bp.c - 0.1 * (bp.m23 - bp.c), bp.m23 + 0.1 * (bp.m23 - bp.c), slices)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    _draw_runs(ax1, _run_segments(f, sign * h, Target.Heart, resolution, mirror), "tab:red", "♥")
    _draw_runs(ax2, _run_segments(f, sign * d, Target.Diamond, resolution, mirror), "tab:blue", "♦")
    for ax, marks in ((ax1, {"τ": bp.tau, "μ": bp.mu, "ξ": bp.xi}),
                      (ax2, {"c": bp.c, "κ": bp.kappa, "ν": bp.nu, "m": bp.m23})):
        for name, v in marks.items():
            ax.axvline(sign * v, color="0.5", lw=0.6, ls=":")
            ax.annotate(name, (sign * v, 1.0), xycoords=("data", "axes fraction"), fontsize=8,
                        ha="center", va="bottom")
        ax.set_xlabel("∇")
        ax.set_ylabel("β")
        ax.legend(loc="best", fontsize=8)
    fig.suptitle(f"fibers over ∇ for t⁴ {a:+g}t² {b:+g}t")
    fig.tight_layout()
    return fig


def figure_dcell(slices: int = 81, resolution: int = 64):
    xs = np.linspace(-0.75, 0.75, slices)
    fig, ax = plt.subplots(figsize=(6, 4))
    _draw_runs(ax, _run_segments(D_POLY, xs, Target.DCell, resolution), "tab:purple", "3 conditions")
    for v in D_THRESHOLDS:
        for s in (1, -1):
            ax.axvline(s * v, color="0.5", lw=0.6, ls=":")
    ax.axhline(-1.0, color="k", lw=0.6, ls="--", label="β = −1 (removed)")
    ax.set_xlabel("∇")
    ax.set_ylabel("β")
    ax.set_title("lines with three conditions through t⁴ − 2t²")
    ax.legend(loc="lower right", fontsize=8)
    return fig


def render(name: str, path: str | Path, **kwargs) -> Path:
    builders = {"cells": figure_cells, "rcurves": figure_rcurves, "lemma7": figure_lemma7,
                "fibers": figure_fibers, "dcell": figure_dcell}
    if name not in builders:
        raise ValueError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}")
    return save(builders[name](**kwargs), path)
