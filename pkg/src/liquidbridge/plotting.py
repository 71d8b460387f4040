"""SVG figures for the CLI report paths.

Each function takes already computed data and writes one figure; nothing
here solves anything. Curves through Chebyshev-sampled data are drawn from
the barycentric interpolant, not from straight segments.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .chebyshev import ChebGrid, bary_eval  # noqa: E402

CURVE_POINTS = 400

_RC = {
    "svg.hashsalt": "liquidbridge",
    "svg.fonttype": "none",
    "font.size": 10,
    "axes.labelsize": 11,
    "lines.linewidth": 1.2,
    "lines.markersize": 3,
    "figure.figsize": (6.0, 4.0),
}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _interpolant(sigmas, values):
    grid = ChebGrid(len(sigmas), (sigmas[0], sigmas[-1]))
    x = np.linspace(grid.lo, grid.hi, CURVE_POINTS)
    return x, bary_eval(grid, values, x)


def profile_figure(path, lower_r, lower_u, top_r, top_u, b):
    """Generating curve with the reference level and the boundary radius."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.plot(top_r[::-1], top_u[::-1], color="k")
        ax.plot(lower_r, lower_u, color="k")
        ax.axhline(0.0, color="0.4", lw=0.8, ls="--")
        ax.axvline(b, color="0.4", lw=0.8)
        ax.set_xlabel("r")
        ax.set_ylabel("u")
        ax.set_xlim(0, b * 1.03)
        _save(fig, path)


def chebyshev_data_figure(path, sigmas, values, ylabel, interpolate=True):
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        if interpolate and len(sigmas) > 1:
            ax.plot(*_interpolant(sigmas, values), color="C0")
        ax.plot(sigmas, values, "o", color="C0", ms=2.5)
        ax.set_xlabel(r"$\sigma$")
        ax.set_ylabel(ylabel)
        _save(fig, path)


def b_figure(path, sigmas, b_final):
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.plot(sigmas, b_final, "o-", ms=2.5)
        ax.set_xlabel(r"$\sigma$")
        ax.set_ylabel("b")
        _save(fig, path)


def foliation_figure(path, trajectories):
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        for t in trajectories:
            ax.plot(t.phis, t.rdot, color="C0", lw=0.5)
        ax.axhline(0.0, color="k", lw=0.8)
        ax.set_xlim(0, math.pi / 2)
        ax.set_xlabel(r"$\phi$")
        ax.set_ylabel(r"$\dot r$")
        _save(fig, path)


def rdot_min_figure(path, trajectories):
    """Endpoint rdot(0, sigma), with the minimum dotted where it differs."""
    s = np.array([t.sigma for t in trajectories])
    end = np.array([t.rdot_at_0 for t in trajectories])
    low = np.array([t.min_rdot for t in trajectories])
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.plot(s, end, color="C0", label=r"$\dot r(0,\sigma)$")
        elsewhere = low < end
        if elsewhere.any():
            ax.plot(s[elsewhere], low[elsewhere], ":", color="C1", label=r"min $\dot r$")
        ax.set_xlabel(r"$\sigma$")
        ax.set_ylabel(r"$\dot r$")
        ax.legend(frameon=False)
        _save(fig, path)


def extended_figure(path, table, asym_sigma, asym_values, column, ylabel):
    """Computed points, dotted asymptote and dashed spline segment."""
    prov = np.array([r.provenance for r in table])
    s = table.sigmas
    v = table.T if column == "T" else table.Tprime
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.plot(asym_sigma, asym_values, ":", color="C2", label="asymptotic")
        fill = prov != "computed"
        ax.plot(s[fill], v[fill], "--", color="C1", label="spline")
        ax.plot(s[~fill], v[~fill], "o", color="C0", ms=2.5, label="computed")
        ax.set_xlabel(r"$\sigma$")
        ax.set_ylabel(ylabel)
        ax.legend(frameon=False)
        _save(fig, path)
