"""Transport toolkit: characteristics, the upwind grid, and their agreement.

The model problem is u_t - c L u_L = 0 on a positive interval of L, whose
exact solution carries the initial profile along L e^{c t}. Everything here
is checked against that closed form.
"""

import math
import re

import numpy as np
import pytest

from growthlab import (
    AdvectivePDE,
    AnalysisError,
    BiasKind,
    ConfigurationError,
    DomainError,
    ModelParams,
    OutOfDomainError,
    TechBias,
    ces,
    characteristic_residual,
    cobb_douglas,
    simulate,
    solve_characteristics,
    solve_upwind,
    verify_corollary_on_trajectory,
)


def _pde(profile=lambda x: x, c=0.02, T=10.0):
    return AdvectivePDE(c=c, initial_profile=profile, L_min=0.5, L_max=2.0,
                        t_horizon=T)


# ===========================================================================
# Closed form along characteristics
# ===========================================================================


def test_identity_profile_advects_exponentially():
    u = solve_characteristics(_pde(), 1.0, 10.0)
    assert isinstance(u, float)
    assert u == pytest.approx(math.exp(0.2), rel=1e-14)


def test_log_profile_is_linear_in_time():
    pde = _pde(profile=np.log)
    for t in (0.0, 2.5, 7.0, 10.0):
        assert solve_characteristics(pde, 1.0, t) == pytest.approx(0.02 * t, abs=1e-14)


def test_zero_speed_freezes_the_profile():
    pde = _pde(profile=lambda x: x ** 2, c=0.0)
    L = np.array([0.6, 1.0, 1.7])
    for t in (0.0, 5.0, 10.0):
        got = solve_characteristics(pde, L, t)
        assert got.shape == (3,)
        assert np.allclose(got, L ** 2, rtol=1e-15)


def test_feet_outside_domain_are_rejected():
    pde = _pde()
    with pytest.raises(OutOfDomainError):
        solve_characteristics(pde, 1.9, 10.0)  # 1.9*e^0.2 > 2
    with pytest.raises(DomainError):
        solve_characteristics(pde, -1.0, 1.0)


def test_constancy_along_a_characteristic_curve():
    pde = _pde(profile=lambda x: x ** 0.7)
    ref = solve_characteristics(pde, 1.2, 2.0)
    for t in (4.0, 6.0, 8.0):
        L_t = 1.2 * math.exp(-0.02 * (t - 2.0))
        assert solve_characteristics(pde, L_t, t) == pytest.approx(ref, rel=1e-12)


def test_solution_operator_composes():
    # evolving to t1+t2 equals evolving to t1, re-seeding, evolving to t2
    pde = _pde(profile=lambda x: x ** 0.7)
    direct = solve_characteristics(pde, 0.9, 7.0)
    mid = AdvectivePDE(c=0.02,
                       initial_profile=lambda x: solve_characteristics(pde, x, 3.0),
                       L_min=0.6, L_max=1.5, t_horizon=10.0)
    assert abs(solve_characteristics(mid, 0.9, 4.0) - direct) <= 1e-12


def test_closed_form_satisfies_the_pde_pointwise():
    for profile in (lambda x: x, lambda x: x ** 0.7):
        pde = _pde(profile=profile)
        for L in np.linspace(0.55, 1.6, 8):
            for t in (0.5, 3.0, 6.0, 9.5):
                assert abs(characteristic_residual(pde, float(L), t)) <= 1e-6


# ===========================================================================
# Upwind scheme
# ===========================================================================


def test_upwind_initial_row_is_the_profile():
    sol = solve_upwind(_pde(), 64, 128)
    assert np.allclose(sol.u[0], sol.L, rtol=1e-15)
    assert sol.u.shape == (129, 64)
    assert sol.t[-1] == pytest.approx(10.0, rel=1e-15)


def test_upwind_is_exact_on_log_profile():
    # the scheme's one-sided difference is exact for u linear in ln L
    sol = solve_upwind(_pde(profile=np.log), 64, 128)
    exact = solve_characteristics(_pde(profile=np.log), sol.L, 10.0)
    assert np.max(np.abs(sol.u[-1] - exact)) <= 1e-12


@pytest.mark.parametrize("profile", [lambda x: x, lambda x: x ** 0.7])
def test_upwind_first_order_convergence(profile):
    pde = _pde(profile=profile)
    errs = []
    for nL in (64, 128, 256, 512):
        sol = solve_upwind(pde, nL, 2 * nL)
        exact = solve_characteristics(pde, sol.L, 10.0)
        errs.append(np.max(np.abs(sol.u[-1] - exact)))
    for e_coarse, e_fine in zip(errs, errs[1:]):
        factor = e_coarse / e_fine
        assert 1.5 <= factor <= 2.5
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all((orders >= 0.8) & (orders <= 1.2))


def test_upwind_negative_speed():
    pde = AdvectivePDE(c=-0.03, initial_profile=lambda x: x, L_min=0.5, L_max=2.0,
                       t_horizon=5.0)
    assert solve_characteristics(pde, 1.0, 5.0) == pytest.approx(math.exp(-0.15),
                                                                 rel=1e-14)
    errs = []
    for nL in (64, 128):
        sol = solve_upwind(pde, nL, 2 * nL)
        exact = solve_characteristics(pde, sol.L, 5.0)
        errs.append(np.max(np.abs(sol.u[-1] - exact)))
    assert 1.5 <= errs[0] / errs[1] <= 2.5


def test_cfl_violation_names_the_remedy():
    pde = _pde()
    with pytest.raises(ConfigurationError, match="CFL violated") as exc_info:
        solve_upwind(pde, 512, 16)
    floor = int(re.search(r"smallest admissible nt is (\d+)", str(exc_info.value)).group(1))
    width = math.log(2.0) - math.log(0.5) - 0.2
    assert floor == math.ceil(0.2 / (width / 511))
    solve_upwind(pde, 512, floor)  # the suggested floor must be admissible


def test_grid_sizes_validated():
    with pytest.raises(ConfigurationError):
        solve_upwind(_pde(), 8, 128)
    with pytest.raises(ConfigurationError):
        solve_upwind(_pde(), 64, 4)


# ===========================================================================
# GridSolution CSV layout
# ===========================================================================


def test_grid_csv_layout(tmp_path):
    sol = solve_upwind(_pde(), 16, 16)
    path = tmp_path / "grid.csv"
    sol.to_csv(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == len(sol.t) + 1
    head = lines[0].split(",")
    assert head[0] == ""  # empty corner cell
    assert np.allclose([float(x) for x in head[1:]], sol.L, rtol=0)
    first = lines[1].split(",")
    assert float(first[0]) == sol.t[0]
    assert np.allclose([float(x) for x in first[1:]], sol.u[0], rtol=0)


# ===========================================================================
# Tie-back to simulated balanced growth
# ===========================================================================


def test_corollary_check_on_balanced_trajectory():
    pf = cobb_douglas(1.0 / 3.0, TechBias(BiasKind.HARROD, 0.02))
    traj = simulate(pf, ModelParams(), t_end=600.0, dt=0.05)
    dev = verify_corollary_on_trajectory(traj, pf, 0.03)
    assert dev <= 1e-4


def test_corollary_check_rejects_unbalanced_trajectory():
    pf = ces(0.25, 0.5, TechBias(BiasKind.HICKS, 0.02))
    traj = simulate(pf, ModelParams(), t_end=600.0, dt=0.05)
    with pytest.raises(AnalysisError):
        verify_corollary_on_trajectory(traj, pf, 0.03)
