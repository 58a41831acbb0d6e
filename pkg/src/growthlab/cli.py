"""Command-line front end: scenario file in, delimited data and reports out.

Five subcommands share one calling convention::

    growthlab <command> --config scenario.cfg --out results/

and write into the output directory (created if absent):

    simulate   trajectory.csv  report.txt  trajectory.png
    verdict    trajectory.csv  report.txt  verdict.png
    classify   classify.csv    report.txt  classify.png
    pde        upwind.csv      exact.csv   report.txt  pde.png
    timescale  fractions.csv   report.txt  timescale.png

Exit status is 0 on success, 1 on any operational failure (unreadable or
invalid config, overflow with no usable window, and so on), and 2 when the
run completed but a detected outcome contradicts what balanced-growth theory
requires; reports are still written in that case.

Every output is deterministic: floats are printed with 17 significant
digits, reports carry the resolved configuration instead of timestamps or
paths, and figures strip the PNG software tag. The --seed flag is accepted
for interface compatibility and ignored.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

from .bgp import Verdict, uzawa_verdict, verify_harrod_form, classification_matrix
from .config import ScenarioConfig, parse_config
from .dynamics import simulate
from .errors import ConfigFileError, GrowthLabError
from .production import CobbDouglasKernel
from .timescale import analytic_cd_rate, convergence_rate
from .transport import GridSolution, solve_characteristics, solve_upwind

__all__ = ["main", "run_subcommand"]

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONSISTENT = 2

# refinement ladder for the pde subcommand's convergence table
_REFINE_SIZES = (64, 128, 256, 512)


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _write_report(path: Path, cfg: ScenarioConfig, blocks, extra_text: str = "") -> None:
    """Resolved configuration first, then `[section]` blocks of key = value.

    ``blocks`` is a list of (section, items) where each item is either an
    already formatted line or a (key, value) pair.
    """
    lines = ["# resolved configuration"]
    lines.extend(cfg.resolved_lines())
    for section, items in blocks:
        lines.append("")
        lines.append(f"[{section}]")
        for item in items:
            if isinstance(item, str):
                lines.append(item)
            else:
                key, value = item
                lines.append(f"{key} = {_fmt(value)}")
    if extra_text:
        lines.append("")
        lines.append(extra_text)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


# ===========================================================================
# Subcommand handlers
# ===========================================================================


def _cmd_simulate(cfg: ScenarioConfig, out: Path) -> int:
    traj = simulate(cfg.production, cfg.params, t_end=cfg.run.t_end, dt=cfg.run.dt)
    traj.to_csv(out / "trajectory.csv")
    rows = [
        ("points", len(traj)),
        ("t_final", float(traj.t[-1])),
        ("K_final", float(traj.K[-1])),
        ("L_final", float(traj.L[-1])),
        ("Y_final", float(traj.Y[-1])),
        ("gY_final", float(traj.gY[-1])),
        ("gK_final", float(traj.gK[-1])),
        ("share_K_final", float(traj.share_K[-1])),
        ("max_abs_accounting_residual", float(np.max(np.abs(traj.eq1_residual)))),
        ("max_abs_euler_residual", float(np.max(np.abs(traj.euler_residual)))),
    ]
    _write_report(out / "report.txt", cfg, [("simulation", rows)])
    if cfg.output.figures:
        from .figures import trajectory_figure

        trajectory_figure(traj, out / "trajectory.png")
    return EXIT_OK


def _cmd_verdict(cfg: ScenarioConfig, out: Path) -> int:
    run = cfg.run
    res = uzawa_verdict(cfg.production, cfg.params, t_end=run.t_end, dt=run.dt,
                        tail_fraction=run.tail_fraction, tol=run.tol)
    # re-simulate over the horizon the verdict actually analysed (it may have
    # been doubled by the guard or truncated before an overflow)
    traj = simulate(cfg.production, cfg.params, t_end=res.horizon, dt=run.dt)
    traj.to_csv(out / "trajectory.csv")

    items: list = list(res.report.to_lines())
    items += [
        ("expected_verdict",
         res.expected_verdict.value if res.expected_verdict is not None else None),
        ("rho_effective", res.rho_effective),
        ("consistent", res.consistent),
        ("horizon", res.horizon),
        ("overflow_at", res.overflow_at),
    ]
    if res.verdict is Verdict.BGP:
        dev = verify_harrod_form(traj, cfg.production,
                                 tail_fraction=run.tail_fraction, tol=run.tol)
        items.append(("labor_augmenting_deviation", dev))
    _write_report(out / "report.txt", cfg, [("verdict", items)])
    if cfg.output.figures:
        from .figures import verdict_figure

        verdict_figure(traj, res.report, out / "verdict.png")
    if not res.consistent:
        print("error: detected outcome contradicts the balanced-growth "
              "classification (see report.txt)", file=sys.stderr)
        return EXIT_INCONSISTENT
    return EXIT_OK


def _cmd_classify(cfg: ScenarioConfig, out: Path) -> int:
    run = cfg.run
    cells = classification_matrix(cfg.params, t_end=run.t_end, dt=run.dt,
                                  tail_fraction=run.tail_fraction, tol=run.tol)

    with open(out / "classify.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["family", "bias", "verdict", "g_hat", "rho_implied",
                         "rho_effective", "expected_verdict", "consistent",
                         "gY_drift", "gK_drift", "share_drift", "horizon"])
        for cell in cells:
            r = cell.result
            writer.writerow([
                cell.family,
                cell.bias,
                r.verdict.value,
                f"{r.g_hat:.17g}",
                f"{r.rho_implied:.17g}",
                "" if r.rho_effective is None else f"{r.rho_effective:.17g}",
                "" if r.expected_verdict is None else r.expected_verdict.value,
                "true" if r.consistent else "false",
                f"{r.report.gY_drift:.17g}",
                f"{r.report.gK_drift:.17g}",
                f"{r.report.share_drift:.17g}",
                f"{r.horizon:.17g}",
            ])

    all_consistent = all(c.result.consistent for c in cells)
    n_bgp = sum(1 for c in cells if c.result.verdict is Verdict.BGP)
    gaps = [abs(c.result.g_hat - (cfg.params.n + c.result.rho_effective))
            for c in cells if c.result.expected_verdict is Verdict.BGP]
    rows = [
        ("cells", len(cells)),
        ("bgp_cells", n_bgp),
        ("nobgp_cells", len(cells) - n_bgp),
        ("all_consistent", all_consistent),
        ("max_growth_rate_gap", max(gaps) if gaps else None),
        ("tol", run.tol),
    ]

    table = [f"{'family':<30} {'bias':<8} {'verdict':<8} {'expected':<8} "
             f"{'consistent':<10} {'g_hat':>14}"]
    for cell in cells:
        r = cell.result
        expected = r.expected_verdict.value if r.expected_verdict is not None else "-"
        table.append(
            f"{cell.family:<30} {cell.bias:<8} {r.verdict.value:<8} "
            f"{expected:<8} {'yes' if r.consistent else 'NO':<10} {r.g_hat:>14.8g}"
        )
    _write_report(out / "report.txt", cfg, [("matrix", rows)],
                  extra_text="\n".join(table))

    if cfg.output.figures:
        from .figures import classify_figure

        classify_figure(cells, run.tol, out / "classify.png")
    if not all_consistent:
        bad = [f"{c.family} / {c.bias}" for c in cells if not c.result.consistent]
        print("error: classification matrix has cells contradicting the "
              "balanced-growth classification: " + "; ".join(bad), file=sys.stderr)
        return EXIT_INCONSISTENT
    return EXIT_OK


def _cmd_pde(cfg: ScenarioConfig, out: Path) -> int:
    pde = cfg.build_pde()
    settings = cfg.pde
    sol = solve_upwind(pde, settings.nL, settings.nt)
    sol.to_csv(out / "upwind.csv")

    exact_u = np.empty_like(sol.u)
    for j, tj in enumerate(sol.t):
        exact_u[j] = solve_characteristics(pde, sol.L, float(tj))
    GridSolution(L=sol.L, t=sol.t, u=exact_u).to_csv(out / "exact.csv")

    err = np.abs(sol.u - exact_u)
    xi_width = math.log(sol.L[-1]) - math.log(sol.L[0])
    nu = abs(pde.c) * (pde.t_horizon / settings.nt) / (xi_width / (settings.nL - 1))
    rows = [
        ("nL", settings.nL),
        ("nt", settings.nt),
        ("cfl_number", nu),
        ("max_abs_error", float(err.max())),
        ("final_slice_error", float(err[-1].max())),
    ]

    refine: list = []
    errs = []
    for nL_k in _REFINE_SIZES:
        nt_k = max(16, round(settings.nt * nL_k / settings.nL))
        sol_k = solve_upwind(pde, nL_k, nt_k)
        exact_k = solve_characteristics(pde, sol_k.L, pde.t_horizon)
        e_k = float(np.max(np.abs(sol_k.u[-1] - exact_k)))
        errs.append(e_k)
        refine.append((f"error_nL_{nL_k}", e_k))
    orders = []
    for (n_a, e_a), (n_b, e_b) in zip(zip(_REFINE_SIZES, errs),
                                      zip(_REFINE_SIZES[1:], errs[1:])):
        if e_a > 1e-12 and e_b > 1e-12:
            order = math.log2(e_a / e_b)
            orders.append(order)
            refine.append((f"order_{n_a}_to_{n_b}", order))
        else:
            refine.append((f"order_{n_a}_to_{n_b}", "exact to roundoff"))
    if orders:
        refine.append(("mean_order", sum(orders) / len(orders)))

    _write_report(out / "report.txt", cfg, [("pde", rows), ("refinement", refine)])
    if cfg.output.figures:
        from .figures import pde_figure

        pde_figure(pde, sol, out / "pde.png")
    return EXIT_OK


def _cmd_timescale(cfg: ScenarioConfig, out: Path) -> int:
    run = cfg.run
    traj = simulate(cfg.production, cfg.params, t_end=run.t_end, dt=run.dt)
    rep = convergence_rate(traj, cfg.production)

    with open(out / "fractions.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("fraction,time\n")
        for frac, when in rep.time_to_fraction.items():
            fh.write(f"{frac:.17g},{when:.17g}\n")

    rows = [
        ("lambda_hat", rep.lambda_hat),
        ("half_life", rep.half_life),
        ("k_star", rep.k_star),
        ("rho_effective", rep.rho_effective),
        ("fit_window_start", rep.fit_window[0]),
        ("fit_window_end", rep.fit_window[1]),
        ("fit_r2", rep.fit_r2),
        ("r2_warning", rep.r2_warning),
    ]
    kernel = cfg.production.kernel
    if isinstance(kernel, CobbDouglasKernel):
        analytic = analytic_cd_rate(kernel.alpha, cfg.params.n, rep.rho_effective,
                                    cfg.params.delta)
        rows.append(("analytic_rate", analytic))
        rows.append(("relative_rate_gap", abs(rep.lambda_hat - analytic) / analytic))
    _write_report(out / "report.txt", cfg, [("timescale", rows)])
    if cfg.output.figures:
        from .figures import timescale_figure

        timescale_figure(traj, cfg.production, rep, out / "timescale.png")
    return EXIT_OK


_HANDLERS = {
    "simulate": _cmd_simulate,
    "verdict": _cmd_verdict,
    "classify": _cmd_classify,
    "pde": _cmd_pde,
    "timescale": _cmd_timescale,
}


def run_subcommand(name: str, cfg: ScenarioConfig, out_dir) -> int:
    """Run one subcommand against an already parsed configuration."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return _HANDLERS[name](cfg, out)


# ===========================================================================
# Argument parsing
# ===========================================================================


class _Parser(argparse.ArgumentParser):
    """Exit with status 1 on usage errors; 2 is reserved for theory violations."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="growthlab",
        description="Numerical laboratory for balanced growth and the "
                    "labor-augmenting representation theorem.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "simulate": "integrate the accumulation dynamics and write the trajectory",
        "verdict": "detect balanced growth and check it against the classification",
        "classify": "run the 12-cell family-by-bias verdict matrix",
        "pde": "solve the transport equation by characteristics and upwind grid",
        "timescale": "measure the convergence rate toward the steady state",
    }
    for name, text in helps.items():
        sp = sub.add_parser(name, help=text, description=text)
        sp.add_argument("--config", required=True, metavar="PATH",
                        help="scenario file (key = value under [section] headers)")
        sp.add_argument("--out", required=True, metavar="DIR",
                        help="output directory, created if absent")
        sp.add_argument("--seed", type=int, default=None,
                        help="accepted and ignored; runs are fully deterministic")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config)
    except ConfigFileError as exc:
        for problem in exc.errors:
            print(f"error: {problem}", file=sys.stderr)
        return EXIT_ERROR
    try:
        return run_subcommand(args.command, cfg, args.out)
    except GrowthLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
