"""Advective transport u_t - c*L*u_L = 0: characteristics and an upwind oracle.

The equation's characteristics satisfy dL/dt = -c*L, so the curves
L(t) = L0*e^{-c*t} carry constant values and the solution with initial
profile F is exactly

    u(L, t) = F(L * e^{c*t}).

Evaluated on a growth trajectory with c = g - n this is precisely output in
labor-augmenting form, which is why balanced growth forces that form. The
module provides the closed-form solution, a first-order upwind scheme as an
independent oracle (in xi = ln L coordinates the variable coefficient
becomes the constant c, giving the textbook scheme with a clean CFL bound),
and the bridge that checks a simulated trajectory against the closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .bgp import Verdict, _harrod_deviation, _tail_mask, detect_bgp
from .dynamics import Trajectory
from .errors import AnalysisError, ConfigurationError, DomainError, OutOfDomainError
from .production import ProductionFunction

__all__ = [
    "AdvectivePDE",
    "GridSolution",
    "solve_characteristics",
    "solve_upwind",
    "characteristic_residual",
    "verify_corollary_on_trajectory",
]

_FD_STEP = float(np.finfo(float).eps) ** (1.0 / 3.0)
_DOMAIN_SLACK = 1e-12  # relative tolerance when testing feet against the domain


@dataclass(frozen=True)
class AdvectivePDE:
    """Problem data for u_t - c*L*u_L = 0 on [L_min, L_max] x [0, t_horizon].

    ``initial_profile`` is a scalar function F(L), finite on the domain; it
    is the state being transported.
    """

    c: float
    initial_profile: Callable = field(repr=False)
    L_min: float
    L_max: float
    t_horizon: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.c):
            raise ConfigurationError(f"advection rate c must be finite, got {self.c!r}")
        if not (self.L_min > 0.0 and math.isfinite(self.L_min)):
            raise ConfigurationError(f"L_min must be > 0, got {self.L_min!r}")
        if not (self.L_max > self.L_min and math.isfinite(self.L_max)):
            raise ConfigurationError(
                f"L_max must exceed L_min, got [{self.L_min!r}, {self.L_max!r}]"
            )
        if not (self.t_horizon >= 0.0 and math.isfinite(self.t_horizon)):
            raise ConfigurationError(f"t_horizon must be >= 0, got {self.t_horizon!r}")
        if not callable(self.initial_profile):
            raise ConfigurationError("initial_profile must be callable")
        probes = (self.L_min, math.sqrt(self.L_min * self.L_max), self.L_max)
        vals = [self.initial_profile(p) for p in probes]
        if not all(np.isfinite(v) for v in vals):
            raise ConfigurationError(
                f"initial_profile must be finite on the domain; got {vals!r} "
                f"at L = {probes!r}"
            )


@dataclass(frozen=True)
class GridSolution:
    """Grid values u(L_i, t_j): L log-spaced, t uniform, u shaped (nt, nL)."""

    L: np.ndarray
    t: np.ndarray
    u: np.ndarray

    def __post_init__(self) -> None:
        if len(self.L) < 2 or len(self.t) < 2:
            raise ConfigurationError("grids need at least 2 points each")
        if self.u.shape != (len(self.t), len(self.L)):
            raise ConfigurationError(
                f"values shaped {self.u.shape}, expected {(len(self.t), len(self.L))}"
            )
        if not np.all(np.isfinite(self.u)):
            raise ConfigurationError("grid solution contains non-finite values")
        for arr in (self.L, self.t, self.u):
            arr.setflags(write=False)

    def to_csv(self, path) -> None:
        """First row the L-grid, first column the t-grid, body the values."""
        with open(Path(path), "w", encoding="utf-8", newline="\n") as fh:
            fh.write("," + ",".join(f"{x:.17g}" for x in self.L) + "\n")
            for j, tj in enumerate(self.t):
                row = ",".join(f"{v:.17g}" for v in self.u[j])
                fh.write(f"{tj:.17g}," + row + "\n")


def solve_characteristics(pde: AdvectivePDE, L, t):
    """Exact solution F(L * e^{c*t}) at (L, t); scalars or arrays.

    The characteristic through (L, t) meets t = 0 at L*e^{c*t}; that foot
    must lie inside the profile domain, since no extrapolation of F is
    performed.

    Raises
    ------
    OutOfDomainError
        If any foot leaves [L_min, L_max].
    """
    L = np.asarray(L, dtype=float) if np.ndim(L) else float(L)
    if np.any(np.asarray(L) <= 0.0):
        raise DomainError(f"L must be strictly positive, got {L!r}")
    foot = L * np.exp(pde.c * np.asarray(t, dtype=float))
    lo = pde.L_min * (1.0 - _DOMAIN_SLACK)
    hi = pde.L_max * (1.0 + _DOMAIN_SLACK)
    if np.any(foot < lo) or np.any(foot > hi):
        worst = float(np.min(foot)) if np.any(foot < lo) else float(np.max(foot))
        raise OutOfDomainError(
            f"characteristic foot L*exp(c*t) = {worst:.6g} falls outside the "
            f"profile domain [{pde.L_min:g}, {pde.L_max:g}]"
        )
    out = pde.initial_profile(foot)
    return out if np.ndim(L) else float(out)


def _restricted_xi_interval(pde: AdvectivePDE) -> tuple[float, float]:
    """Sub-interval of [ln L_min, ln L_max] whose feet stay in the domain.

    A grid point xi needs xi + c*t inside [ln L_min, ln L_max] for all
    t in [0, t_horizon], which trims c*t_horizon off one end. The trimmed
    interval must remain non-degenerate.
    """
    a, b = math.log(pde.L_min), math.log(pde.L_max)
    shift = pde.c * pde.t_horizon
    lo, hi = (a, b - shift) if pde.c >= 0.0 else (a - shift, b)
    if hi <= lo:
        raise ConfigurationError(
            f"|c|*t_horizon = {abs(shift):g} consumes the whole profile domain "
            f"(width {b - a:g} in log-L); shorten t_horizon or widen the domain"
        )
    return lo, hi


def solve_upwind(pde: AdvectivePDE, nL: int, nt: int) -> GridSolution:
    """First-order upwind solve on a log-L grid; the independent oracle.

    With xi = ln L the equation becomes u_t - c*u_xi = 0 (L*d/dL = d/dxi),
    so one constant-coefficient stencil serves the whole grid. Values at
    (xi, t) originate at xi + c*t, i.e. from larger xi when c > 0, so the
    upwind difference looks toward +xi and the inflow boundary is the
    right edge (mirrored for c < 0). The inflow node is set to the exact
    characteristic value each step. Stability requires the CFL condition
    |c|*dtau <= dxi.

    Parameters
    ----------
    nL : int
        Number of spatial grid points (>= 16), log-spaced on the restricted
        interval that keeps every foot inside the profile domain.
    nt : int
        Number of time steps (>= 16); the time grid has nt+1 points.

    Raises
    ------
    ConfigurationError
        If the CFL condition fails; the message reports the smallest
        admissible nt.
    """
    if nL < 16 or nt < 16:
        raise ConfigurationError(f"need nL >= 16 and nt >= 16, got nL={nL}, nt={nt}")
    lo, hi = _restricted_xi_interval(pde)
    xi = np.linspace(lo, hi, nL)
    dxi = (hi - lo) / (nL - 1)
    T = pde.t_horizon
    dtau = T / nt
    nu = abs(pde.c) * dtau / dxi
    if nu > 1.0 + 1e-12:
        nt_floor = int(math.ceil(abs(pde.c) * T / dxi))
        raise ConfigurationError(
            f"CFL violated: |c|*dtau/dxi = {nu:.6g} > 1; "
            f"smallest admissible nt is {nt_floor}"
        )

    F = pde.initial_profile
    tgrid = np.arange(nt + 1) * dtau
    u = np.empty((nt + 1, nL))
    u[0] = F(np.exp(xi))
    if pde.c > 0.0:
        for j in range(1, nt + 1):
            prev = u[j - 1]
            u[j, :-1] = prev[:-1] + nu * (prev[1:] - prev[:-1])
            u[j, -1] = F(math.exp(xi[-1] + pde.c * tgrid[j]))
    elif pde.c < 0.0:
        for j in range(1, nt + 1):
            prev = u[j - 1]
            u[j, 1:] = prev[1:] - nu * (prev[1:] - prev[:-1])
            u[j, 0] = F(math.exp(xi[0] + pde.c * tgrid[j]))
    else:
        u[1:] = u[0]
    return GridSolution(L=np.exp(xi), t=tgrid, u=u)


def characteristic_residual(pde: AdvectivePDE, L: float, t: float) -> float:
    """Scaled residual |u_t - c*L*u_L| of the closed form at one point.

    Both partials come from central differences of
    :func:`solve_characteristics` with step max(|x|,1)*eps^(1/3); the
    residual is scaled by |u_t| + |c*L*u_L| + 1 so the bound is meaningful
    whatever the profile's magnitude. Probes sit at L +/- h and t +/- h, so
    the point must keep that margin inside the domain.
    """
    hL = max(abs(L), 1.0) * _FD_STEP
    ht = max(abs(t), 1.0) * _FD_STEP
    u_t = (solve_characteristics(pde, L, t + ht)
           - solve_characteristics(pde, L, t - ht)) / (2.0 * ht)
    u_L = (solve_characteristics(pde, L + hL, t)
           - solve_characteristics(pde, L - hL, t)) / (2.0 * hL)
    adv = pde.c * L * u_L
    return abs(u_t - adv) / (abs(u_t) + abs(adv) + 1.0)


def verify_corollary_on_trajectory(traj: Trajectory, pf: ProductionFunction,
                                   g_hat: float, *, tail_fraction: float = 0.25,
                                   tol: float = 1e-4) -> float:
    """Check recorded output against the transported labor-augmenting form.

    Along characteristics the capital argument rides as a frozen parameter,
    so the transported solution evaluated on a trajectory reads
    f(K(t), L(t)*e^{(g_hat-n)*t}). Returns the tail-window max relative
    deviation of recorded Y from that form, using the supplied g_hat.

    Raises
    ------
    AnalysisError
        If the trajectory is not balanced; off a balanced path no such form
        exists to verify.
    """
    report = detect_bgp(traj, tail_fraction, tol)
    if report.verdict is not Verdict.BGP:
        raise AnalysisError(
            "trajectory is not on a balanced growth path; the transported "
            "labor-augmenting form exists only on balanced paths"
        )
    return _harrod_deviation(traj, pf, g_hat, _tail_mask(traj.t, tail_fraction))
