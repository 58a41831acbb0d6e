"""Convergence timescales: how long the approach to balanced growth takes.

The headline fact being quantified: with conventional parameters the
half-life of the transition is a decade or more, and the tail (the last
percent of the initial gap) takes several lifetimes when the capital share
is high. Convergence is measured in effective-units capital, the scalar
whose fixed point defines the balanced path, so the target is stationary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bgp import equivalent_harrod_rate
from .dynamics import Trajectory
from .errors import AnalysisError, ConfigurationError
from .production import ProductionFunction

__all__ = [
    "TimescaleReport",
    "steady_state_effective_capital",
    "convergence_rate",
    "analytic_cd_rate",
]

_BISECT_TOL = 1e-12
_FRACTIONS = (0.5, 0.1, 0.05, 0.01)


@dataclass(frozen=True)
class TimescaleReport:
    """Fitted convergence rate and derived times.

    ``lambda_hat`` is the exponential rate fitted to log|k - k*| over the
    window where the gap lies between 1% and 50% of its initial size;
    ``half_life`` is ln(2)/lambda_hat. ``time_to_fraction`` maps each gap
    fraction to the first grid time at which the gap falls to that fraction
    of the initial gap. ``r2_warning`` flags a fit with r^2 below 0.99.
    """

    lambda_hat: float
    half_life: float
    time_to_fraction: dict[float, float]
    fit_window: tuple[float, float]
    fit_r2: float
    r2_warning: bool
    k_star: float
    rho_effective: float


def steady_state_effective_capital(pf: ProductionFunction, s: float,
                                   n: float, delta: float) -> float:
    """Root k* of s*f(k, 1) = (n + rho + delta)*k by bisection to 1e-12.

    rho is the technology's equivalent labor-augmenting rate.

    Raises
    ------
    AnalysisError
        If the bias admits no labor-augmenting representation, or no root
        exists (investment never falls below break-even, or never exceeds
        it).
    """
    rho = equivalent_harrod_rate(pf)
    if rho is None:
        raise AnalysisError(
            "no labor-augmenting representation exists for this technology; "
            "there is no effective-units steady state to solve for"
        )
    breakeven = n + rho + delta
    if breakeven <= 0.0:
        raise ConfigurationError(f"n + rho + delta must be > 0, got {breakeven!r}")

    def excess(k: float) -> float:
        return s * pf.kernel.value(k, 1.0) - breakeven * k

    lo = 1e-8
    while excess(lo) <= 0.0:
        lo *= 0.1
        if lo < 1e-300:
            raise AnalysisError(
                "saving never exceeds break-even investment near k = 0; "
                "no steady state exists"
            )
    hi = max(1.0, 2.0 * lo)
    while excess(hi) > 0.0:
        hi *= 2.0
        if hi > 2.0 ** 200:
            raise AnalysisError(
                "saving exceeds break-even investment at every scale; "
                "no steady state exists"
            )
    while hi - lo > _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def convergence_rate(traj: Trajectory, pf: ProductionFunction,
                     fractions: tuple[float, ...] = _FRACTIONS) -> TimescaleReport:
    """Fit the exponential approach of effective capital to its fixed point.

    gap(t) = |k(t) - k*| with k(t) = K/(L*e^{rho*t}) and k* from
    :func:`steady_state_effective_capital`; log gap is fitted linearly over
    the window where gap is between 1% and 50% of gap(0). The trajectory
    must start away from the fixed point (at least 10% relative) or there
    is no transition to time.

    Raises
    ------
    AnalysisError
        If the scenario has no balanced path, starts on it, or the gap
        never reaches the requested fractions within the horizon.
    """
    mp = traj.params
    rho = equivalent_harrod_rate(pf)
    if rho is None:
        raise AnalysisError(
            "no balanced growth path exists under this bias; "
            "there is no convergence rate to measure"
        )
    k_star = steady_state_effective_capital(pf, mp.s, mp.n, mp.delta)
    k = traj.K / (traj.L * np.exp(rho * traj.t))
    gap = np.abs(k - k_star)
    gap0 = float(gap[0])
    if abs(k[0] / k_star - 1.0) < 0.1:
        raise AnalysisError(
            f"trajectory starts within 10% of k* = {k_star:.6g}; "
            "start farther away to measure a transition"
        )

    def first_index(threshold: float) -> int:
        hits = gap <= threshold
        if not np.any(hits):
            raise AnalysisError(
                f"gap never falls to {threshold:.3g} within the horizon; "
                "the scenario is not converging or t_end is too short"
            )
        return int(np.argmax(hits))

    i_hi = first_index(0.5 * gap0)
    i_lo = first_index(0.01 * gap0)
    if i_lo - i_hi < 10:
        raise AnalysisError(
            f"only {i_lo - i_hi} grid points lie in the 1%-50% gap window; "
            "reduce dt or start farther from k*"
        )
    t_w = traj.t[i_hi:i_lo]
    log_gap = np.log(gap[i_hi:i_lo])
    slope, intercept = np.polyfit(t_w, log_gap, 1)
    lam = -float(slope)
    if lam <= 0.0:
        raise AnalysisError(f"fitted rate is not positive ({lam:.3g}); not converging")
    fitted = slope * t_w + intercept
    ss_res = float(np.sum((log_gap - fitted) ** 2))
    ss_tot = float(np.sum((log_gap - log_gap.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 0.0

    crossings = {float(f): float(traj.t[first_index(f * gap0)]) for f in fractions}
    return TimescaleReport(
        lambda_hat=lam,
        half_life=math.log(2.0) / lam,
        time_to_fraction=crossings,
        fit_window=(float(t_w[0]), float(t_w[-1])),
        fit_r2=r2,
        r2_warning=r2 < 0.99,
        k_star=k_star,
        rho_effective=rho,
    )


def analytic_cd_rate(alpha: float, n: float, rho: float, delta: float) -> float:
    """Linearized Cobb-Douglas convergence rate (1 - alpha)*(n + rho + delta).

    The boundary values are meaningful: alpha = 0 converges at the full rate
    n + rho + delta, and alpha -> 1 gives 0 (the no-convergence limit).
    """
    if not (0.0 <= alpha <= 1.0):
        raise ConfigurationError(f"alpha out of range [0,1]: got {alpha!r}")
    if n + rho + delta <= 0.0:
        raise ConfigurationError(
            f"n + rho + delta must be > 0, got {n + rho + delta!r}"
        )
    return (1.0 - alpha) * (n + rho + delta)
