"""Diagnostic figures for the report paths. Optional: nothing imports this
module unless figure output is enabled, so headless library use never touches
matplotlib.

Every figure is rendered with the Agg backend at a fixed size and dpi, and
saved with the PNG Software tag stripped, so repeated runs of the same
scenario produce byte-identical files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .bgp import BGPReport, MatrixCell, equivalent_harrod_rate
from .dynamics import Trajectory
from .production import ProductionFunction
from .timescale import TimescaleReport, steady_state_effective_capital
from .transport import AdvectivePDE, GridSolution

__all__ = [
    "trajectory_figure",
    "verdict_figure",
    "classify_figure",
    "pde_figure",
    "timescale_figure",
]

_DPI = 110
_SAVE = {"dpi": _DPI, "metadata": {"Software": None}}


def trajectory_figure(traj: Trajectory, path) -> None:
    """Levels (log scale) and growth diagnostics for one simulated run."""
    fig, (ax0, ax1) = plt.subplots(2, 1, figsize=(7.0, 6.4), sharex=True,
                                   constrained_layout=True)
    ax0.semilogy(traj.t, traj.Y, label="Y")
    ax0.semilogy(traj.t, traj.K, label="K")
    ax0.semilogy(traj.t, traj.L, label="L")
    ax0.set_ylabel("level (log scale)")
    ax0.legend(loc="upper left")
    ax0.set_title("simulated aggregates")

    ax1.plot(traj.t, traj.gY, label="growth of Y")
    ax1.plot(traj.t, traj.gK, label="growth of K")
    ax1.plot(traj.t, traj.share_K, label="capital share", linestyle="--")
    ax1.set_xlabel("t")
    ax1.set_ylabel("rate / share")
    ax1.legend(loc="best")
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def verdict_figure(traj: Trajectory, report: BGPReport, path) -> None:
    """Growth rates with the fitted common rate and the detection window."""
    fig, ax = plt.subplots(figsize=(7.0, 4.4), constrained_layout=True)
    ax.plot(traj.t, traj.gY, label="growth of Y")
    ax.plot(traj.t, traj.gK, label="growth of K")
    ax.axhline(report.g_hat, color="k", linestyle=":",
               label=f"g_hat = {report.g_hat:.6g}")
    ax.axvspan(report.window[0], report.window[1], color="0.85",
               label="detection window")
    ax.set_xlabel("t")
    ax.set_ylabel("growth rate")
    ax.set_title(f"verdict: {report.verdict.value}")
    ax.legend(loc="best")
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def classify_figure(cells: list[MatrixCell], tol: float, path) -> None:
    """Worst drift per family/bias cell against the detection tolerance."""
    labels = [f"{c.family}\n{c.bias}" for c in cells]
    drifts = [max(c.result.report.gY_drift, c.result.report.gK_drift,
                  c.result.report.share_drift) for c in cells]
    colors = ["tab:blue" if c.result.verdict.value == "BGP" else "tab:red"
              for c in cells]
    x = np.arange(len(cells))
    fig, ax = plt.subplots(figsize=(max(8.0, 0.9 * len(cells)), 4.8),
                           constrained_layout=True)
    ax.bar(x, drifts, color=colors)
    ax.axhline(tol, color="k", linestyle=":", label=f"tolerance = {tol:g}")
    ax.set_yscale("log")
    ax.set_xticks(x)
    ax.set_xticklabels(labels, fontsize=7)
    ax.set_ylabel("max drift on window (log scale)")
    ax.set_title("balanced-growth classification (blue = BGP, red = NoBGP)")
    ax.legend(loc="best")
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def pde_figure(pde: AdvectivePDE, sol: GridSolution, path) -> None:
    """Final-time slice of the upwind solution against the exact transport."""
    from .transport import solve_characteristics

    L = sol.L
    exact = solve_characteristics(pde, L, float(sol.t[-1]))
    approx = sol.u[-1]
    err = np.abs(approx - exact)

    fig, (ax0, ax1) = plt.subplots(2, 1, figsize=(7.0, 6.0), sharex=True,
                                   constrained_layout=True)
    ax0.plot(L, exact, label="characteristics (exact)")
    ax0.plot(L, approx, linestyle="--", label="first-order upwind")
    ax0.set_ylabel("u")
    ax0.set_title(f"transport solution at t = {float(sol.t[-1]):g}")
    ax0.legend(loc="best")

    ax1.semilogy(L, np.maximum(err, 1e-20))
    ax1.set_xlabel("L")
    ax1.set_ylabel("abs error (log scale)")
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def timescale_figure(traj: Trajectory, pf: ProductionFunction,
                     report: TimescaleReport, path) -> None:
    """Gap to the steady state (log scale) with the fitted decay rate."""
    mp = traj.params
    rho = equivalent_harrod_rate(pf)
    if rho is None:
        rho = 0.0
    k = traj.K / (traj.L * np.exp(rho * traj.t))
    gap = np.abs(k - report.k_star)

    fig, ax = plt.subplots(figsize=(7.0, 4.4), constrained_layout=True)
    ax.semilogy(traj.t, np.maximum(gap, 1e-300), label="|k - k*|")
    t_lo, t_hi = report.fit_window
    mask = (traj.t >= t_lo) & (traj.t <= t_hi)
    if np.any(mask):
        t0 = traj.t[mask][0]
        g0 = gap[mask][0]
        tt = np.linspace(t_lo, t_hi, 50)
        ax.semilogy(tt, g0 * np.exp(-report.lambda_hat * (tt - t0)),
                    linestyle="--", color="k",
                    label=f"fit: decay rate {report.lambda_hat:.4g}")
    for frac, when in sorted(report.time_to_fraction.items(), reverse=True):
        ax.axvline(when, color="0.7", linestyle=":")
        ax.annotate(f"{frac:g}", (when, ax.get_ylim()[1]),
                    textcoords="offset points", xytext=(2, -12), fontsize=7)
    ax.set_xlabel("t")
    ax.set_ylabel("gap (log scale)")
    ax.set_title(f"convergence toward k* = {report.k_star:.6g} "
                 f"(half-life {report.half_life:.4g})")
    ax.legend(loc="best")
    fig.savefig(path, **_SAVE)
    plt.close(fig)
