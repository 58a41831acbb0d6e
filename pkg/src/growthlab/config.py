"""Scenario files: line-oriented `key = value` under `[section]` headers.

Comments start with `#` (full-line or trailing), blank lines are ignored,
and every key is validated against a strict schema: unknown sections,
unknown keys, duplicates, malformed lines and out-of-range values are all
collected with their line numbers and reported together, not one at a time.
Omitted keys fall back to package defaults, so the minimal useful file is
just a [production] section and a [bias] section.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .dynamics import ModelParams
from .errors import ConfigFileError
from .production import BiasKind, ProductionFunction, TechBias, ces, cobb_douglas
from .transport import AdvectivePDE

__all__ = [
    "RunSettings",
    "PDESettings",
    "OutputSettings",
    "ScenarioConfig",
    "parse_config",
]

_BOOLS = {"true": True, "false": False}
_PROFILES = ("identity", "log", "power")

# section -> key -> python type ("family"-dependent keys are checked later)
_SCHEMA: dict[str, dict[str, type]] = {
    "production": {"family": str, "alpha": float, "share": float, "sigma": float},
    "bias": {"kind": str, "rate": float},
    "model": {"s": float, "delta": float, "n": float, "K0": float, "L0": float},
    "run": {"t_end": float, "dt": float, "tail_fraction": float, "tol": float},
    "pde": {"c": float, "L_min": float, "L_max": float, "t_horizon": float,
            "nL": int, "nt": int, "profile": str, "exponent": float},
    "output": {"figures": bool},
}


@dataclass(frozen=True)
class RunSettings:
    t_end: float = 600.0
    dt: float = 0.05
    tail_fraction: float = 0.25
    tol: float = 1e-4


@dataclass(frozen=True)
class PDESettings:
    c: float = 0.02
    L_min: float = 0.5
    L_max: float = 2.0
    t_horizon: float = 10.0
    nL: int = 256
    nt: int = 512
    profile: str = "identity"
    exponent: float = 0.7


@dataclass(frozen=True)
class OutputSettings:
    figures: bool = True


def _profile_fn(name: str, exponent: float):
    if name == "identity":
        return lambda x: x
    if name == "log":
        return np.log
    return lambda x: x ** exponent


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully validated scenario: technology, closure, run and solver settings."""

    production: ProductionFunction
    params: ModelParams
    run: RunSettings
    pde: PDESettings
    output: OutputSettings

    def build_pde(self) -> AdvectivePDE:
        """Materialize the transport problem from the [pde] settings."""
        p = self.pde
        return AdvectivePDE(c=p.c, initial_profile=_profile_fn(p.profile, p.exponent),
                            L_min=p.L_min, L_max=p.L_max, t_horizon=p.t_horizon)

    def resolved_lines(self) -> list[str]:
        """The full resolved configuration as `[section]` / `key = value` lines.

        This is what reports embed as their reproducibility header: defaults
        filled in, sigma = 1 already routed to Cobb-Douglas, the bias rate
        shown as the rate actually applied.
        """
        kern = self.production.kernel
        lines = ["[production]", f"family = {kern.family}"]
        if kern.family == "cobb_douglas":
            lines.append(f"alpha = {kern.alpha:.17g}")
        elif kern.family == "ces":
            lines.append(f"share = {kern.share:.17g}")
            lines.append(f"sigma = {kern.sigma:.17g}")
        bias = self.production.bias
        lines += [
            "[bias]",
            f"kind = {bias.kind.value}",
            f"rate = {bias.effective_rate:.17g}",
            "[model]",
            f"s = {self.params.s:.17g}",
            f"delta = {self.params.delta:.17g}",
            f"n = {self.params.n:.17g}",
            f"K0 = {self.params.K0:.17g}",
            f"L0 = {self.params.L0:.17g}",
            "[run]",
            f"t_end = {self.run.t_end:.17g}",
            f"dt = {self.run.dt:.17g}",
            f"tail_fraction = {self.run.tail_fraction:.17g}",
            f"tol = {self.run.tol:.17g}",
            "[pde]",
            f"c = {self.pde.c:.17g}",
            f"L_min = {self.pde.L_min:.17g}",
            f"L_max = {self.pde.L_max:.17g}",
            f"t_horizon = {self.pde.t_horizon:.17g}",
            f"nL = {self.pde.nL}",
            f"nt = {self.pde.nt}",
            f"profile = {self.pde.profile}",
            f"exponent = {self.pde.exponent:.17g}",
            "[output]",
            f"figures = {'true' if self.output.figures else 'false'}",
        ]
        return lines


def _parse_entries(text: str, errors: list[str]):
    """First pass: raw (section, key) -> (string value, line number)."""
    entries: dict[tuple[str, str], tuple[str, int]] = {}
    section_lines: dict[str, int] = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name not in _SCHEMA:
                errors.append(f"line {lineno}: unknown section [{name}]")
                section = None
            else:
                section = name
                section_lines.setdefault(name, lineno)
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'key = value', got {line!r}")
            continue
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if section is None:
            errors.append(f"line {lineno}: key {key!r} outside any [section]")
            continue
        if key not in _SCHEMA[section]:
            errors.append(f"line {lineno}: unknown key {key!r} in [{section}]")
            continue
        if (section, key) in entries:
            errors.append(f"line {lineno}: duplicate key {key!r} in [{section}]")
            continue
        if not value:
            errors.append(f"line {lineno}: empty value for {key!r}")
            continue
        entries[(section, key)] = (value, lineno)
    return entries, section_lines


class _Resolver:
    """Second pass: typed lookup with per-line error collection."""

    def __init__(self, entries, errors):
        self.entries = entries
        self.errors = errors

    def has(self, section: str, key: str) -> bool:
        return (section, key) in self.entries

    def line(self, section: str, key: str) -> int:
        return self.entries[(section, key)][1]

    def get(self, section: str, key: str, default):
        if (section, key) not in self.entries:
            return default
        raw, lineno = self.entries[(section, key)]
        want = _SCHEMA[section][key]
        if want is bool:
            if raw.lower() not in _BOOLS:
                self.errors.append(
                    f"line {lineno}: expected true or false for {key!r}, got {raw!r}")
                return default
            return _BOOLS[raw.lower()]
        if want is int:
            try:
                return int(raw)
            except ValueError:
                self.errors.append(
                    f"line {lineno}: expected an integer for {key!r}, got {raw!r}")
                return default
        if want is float:
            try:
                value = float(raw)
            except ValueError:
                self.errors.append(
                    f"line {lineno}: expected a number for {key!r}, got {raw!r}")
                return default
            if not np.isfinite(value):
                self.errors.append(f"line {lineno}: {key!r} must be finite, got {raw!r}")
                return default
            return value
        return raw

    def check(self, ok: bool, section: str, key: str, message: str) -> bool:
        """Record `message` against key's line (if present) unless ok."""
        if not ok:
            prefix = f"line {self.line(section, key)}: " if self.has(section, key) else ""
            self.errors.append(prefix + message)
        return ok


def parse_config(path) -> ScenarioConfig:
    """Parse and fully validate a scenario file.

    Raises
    ------
    ConfigFileError
        Carrying the complete list of problems, each tagged with its line
        number where one exists.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigFileError([f"cannot read config file {path}: {exc}"]) from exc

    errors: list[str] = []
    entries, section_lines = _parse_entries(text, errors)
    r = _Resolver(entries, errors)

    # --- production ---
    family = r.get("production", "family", "cobb_douglas")
    alpha = r.get("production", "alpha", 1.0 / 3.0)
    share = r.get("production", "share", 0.25)
    sigma = r.get("production", "sigma", None)
    if family not in ("cobb_douglas", "ces"):
        r.check(False, "production", "family",
                f"unknown family {family!r} (choose cobb_douglas or ces)")
        family = "cobb_douglas"
    if family == "cobb_douglas":
        for key in ("share", "sigma"):
            if r.has("production", key):
                r.check(False, "production", key,
                        f"key {key!r} not valid for family cobb_douglas")
        r.check(0.0 < alpha < 1.0, "production", "alpha", "alpha out of range (0,1)")
    else:
        if r.has("production", "alpha"):
            r.check(False, "production", "alpha", "key 'alpha' not valid for family ces")
        r.check(0.0 < share < 1.0, "production", "share", "share out of range (0,1)")
        if sigma is None:
            prod_line = section_lines.get("production")
            at = f"line {prod_line}: " if prod_line else ""
            errors.append(f"{at}missing required key 'sigma' for family ces")
        else:
            r.check(sigma > 0.0, "production", "sigma", "sigma must be > 0")

    # --- bias ---
    kind_raw = r.get("bias", "kind", "none")
    rate = r.get("bias", "rate", 0.02)
    kind = None
    try:
        kind = BiasKind(kind_raw)
    except ValueError:
        r.check(False, "bias", "kind",
                f"unknown bias kind {kind_raw!r} (choose none, harrod, hicks or solow)")

    # --- model ---
    s = r.get("model", "s", 0.2)
    delta = r.get("model", "delta", 0.05)
    n = r.get("model", "n", 0.01)
    K0 = r.get("model", "K0", 1.0)
    L0 = r.get("model", "L0", 1.0)
    r.check(0.0 < s < 1.0, "model", "s", "s out of range (0,1)")
    r.check(delta >= 0.0, "model", "delta", "delta must be >= 0")
    r.check(K0 > 0.0, "model", "K0", "K0 must be > 0")
    r.check(L0 > 0.0, "model", "L0", "L0 must be > 0")

    # --- run ---
    t_end = r.get("run", "t_end", 600.0)
    dt = r.get("run", "dt", 0.05)
    tail_fraction = r.get("run", "tail_fraction", 0.25)
    tol = r.get("run", "tol", 1e-4)
    r.check(t_end > 0.0, "run", "t_end", "t_end must be > 0")
    if r.check(dt > 0.0, "run", "dt", "dt must be > 0") and t_end > 0.0:
        r.check(dt <= t_end, "run", "dt", f"dt must not exceed t_end ({t_end:g})")
    r.check(0.0 < tail_fraction < 1.0, "run", "tail_fraction",
            "tail_fraction out of range (0,1)")
    r.check(tol > 0.0, "run", "tol", "tol must be > 0")

    # --- pde ---
    c = r.get("pde", "c", 0.02)
    L_min = r.get("pde", "L_min", 0.5)
    L_max = r.get("pde", "L_max", 2.0)
    t_horizon = r.get("pde", "t_horizon", 10.0)
    nL = r.get("pde", "nL", 256)
    nt = r.get("pde", "nt", 512)
    profile = r.get("pde", "profile", "identity")
    exponent = r.get("pde", "exponent", 0.7)
    r.check(L_min > 0.0, "pde", "L_min", "L_min must be > 0")
    r.check(L_max > L_min, "pde", "L_max", f"L_max must exceed L_min ({L_min:g})")
    r.check(t_horizon >= 0.0, "pde", "t_horizon", "t_horizon must be >= 0")
    r.check(nL > 0, "pde", "nL", "nL must be a positive integer")
    r.check(nt > 0, "pde", "nt", "nt must be a positive integer")
    r.check(profile in _PROFILES, "pde", "profile",
            f"unknown profile {profile!r} (choose identity, log or power)")

    # --- output ---
    figures = r.get("output", "figures", True)

    if errors:
        def line_of(msg: str) -> int:
            m = re.match(r"line (\d+):", msg)
            return int(m.group(1)) if m else 10 ** 9
        errors.sort(key=line_of)
        raise ConfigFileError(errors)

    bias = TechBias(kind, rate) if kind is not BiasKind.NONE else TechBias()
    if family == "cobb_douglas":
        production = cobb_douglas(alpha, bias)
    else:
        production = ces(share, sigma, bias)
    return ScenarioConfig(
        production=production,
        params=ModelParams(s=s, delta=delta, n=n, K0=K0, L0=L0),
        run=RunSettings(t_end=t_end, dt=dt, tail_fraction=tail_fraction, tol=tol),
        pde=PDESettings(c=c, L_min=L_min, L_max=L_max, t_horizon=t_horizon,
                        nL=nL, nt=nt, profile=profile, exponent=exponent),
        output=OutputSettings(figures=figures),
    )
