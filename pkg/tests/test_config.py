"""Scenario-file parsing: defaults, strictness, and error collection."""

import pytest

from growthlab import (
    BiasKind,
    CESKernel,
    CobbDouglasKernel,
    ConfigFileError,
    ModelParams,
    parse_config,
)


def write(tmp_path, text):
    path = tmp_path / "scenario.cfg"
    path.write_text(text, encoding="utf-8")
    return path


def errors_of(tmp_path, text):
    with pytest.raises(ConfigFileError) as exc_info:
        parse_config(write(tmp_path, text))
    return exc_info.value.errors


def test_empty_file_yields_all_defaults(tmp_path):
    cfg = parse_config(write(tmp_path, ""))
    assert isinstance(cfg.production.kernel, CobbDouglasKernel)
    assert cfg.production.kernel.alpha == pytest.approx(1.0 / 3.0)
    assert cfg.production.bias.kind is BiasKind.NONE
    assert cfg.params == ModelParams()
    assert cfg.run.t_end == 600.0
    assert cfg.run.dt == 0.05
    assert cfg.pde.nL == 256
    assert cfg.output.figures is True


def test_full_scenario_roundtrip(tmp_path):
    cfg = parse_config(write(tmp_path, """
# a complete scenario
[production]
family = ces
share = 0.3
sigma = 2.0

[bias]
kind = harrod
rate = 0.025   # inline comment

[model]
s = 0.25
delta = 0.06
n = 0.015
K0 = 2.0
L0 = 1.5

[run]
t_end = 300
dt = 0.1
tail_fraction = 0.3
tol = 5e-5

[pde]
c = 0.03
L_min = 0.4
L_max = 3.0
t_horizon = 8
nL = 128
nt = 256
profile = power
exponent = 0.6

[output]
figures = false
"""))
    kern = cfg.production.kernel
    assert isinstance(kern, CESKernel)
    assert (kern.share, kern.sigma) == (0.3, 2.0)
    assert cfg.production.bias.kind is BiasKind.HARROD
    assert cfg.production.bias.rate == 0.025
    assert cfg.params.s == 0.25
    assert cfg.run.tol == 5e-5
    assert cfg.pde.profile == "power"
    assert cfg.output.figures is False
    pde = cfg.build_pde()
    assert pde.initial_profile(2.0) == pytest.approx(2.0 ** 0.6, rel=1e-14)
    # the resolved echo names every resolved key
    lines = cfg.resolved_lines()
    assert "share = 0.29999999999999999" in lines
    assert "figures = false" in lines
    assert parse_config(write(tmp_path, "")).resolved_lines() == parse_config(
        write(tmp_path, "")).resolved_lines()


def test_alpha_range_error_carries_its_line(tmp_path):
    errs = errors_of(tmp_path, "[production]\nfamily = cobb_douglas\nalpha = 1.5\n")
    assert errs == ["line 3: alpha out of range (0,1)"]


def test_unknown_key_is_rejected(tmp_path):
    errs = errors_of(tmp_path, "[production]\nfamily = ces\nsigma = 0.5\nsigma_ces = 2\n")
    assert errs == ["line 4: unknown key 'sigma_ces' in [production]"]


def test_sigma_required_for_ces(tmp_path):
    errs = errors_of(tmp_path, "[production]\nfamily = ces\nshare = 0.3\n")
    assert errs == ["line 1: missing required key 'sigma' for family ces"]


def test_family_specific_keys_enforced(tmp_path):
    errs = errors_of(tmp_path, "[production]\nfamily = cobb_douglas\nsigma = 2\n")
    assert "line 3: key 'sigma' not valid for family cobb_douglas" in errs
    errs = errors_of(tmp_path, "[production]\nfamily = ces\nsigma = 2\nalpha = 0.5\n")
    assert "line 4: key 'alpha' not valid for family ces" in errs


def test_all_problems_reported_in_line_order(tmp_path):
    errs = errors_of(tmp_path, """[production]
family = nobody
alpha = 2

[model]
s = 0.2
s = 0.3

[run]
dt = soon

[mystery]
x = 1
""")
    assert len(errs) == 6
    lines = [int(e.split()[1].rstrip(":")) for e in errs]
    assert lines == sorted(lines)
    assert any("unknown family" in e for e in errs)
    assert any("duplicate key" in e for e in errs)
    assert any("expected a number" in e for e in errs)
    assert any("unknown section" in e for e in errs)
    assert any("outside any [section]" in e for e in errs)


def test_malformed_line_and_types(tmp_path):
    errs = errors_of(tmp_path, "[pde]\nnL = 2.5\njust words\n[output]\nfigures = maybe\n")
    assert any("expected an integer for 'nL'" in e for e in errs)
    assert any("expected 'key = value'" in e for e in errs)
    assert any("expected true or false" in e for e in errs)


def test_cross_field_constraints(tmp_path):
    errs = errors_of(tmp_path, "[run]\nt_end = 1\ndt = 5\n")
    assert errs == ["line 3: dt must not exceed t_end (1)"]
    errs = errors_of(tmp_path, "[pde]\nL_min = 2.0\nL_max = 1.0\n")
    assert errs == ["line 3: L_max must exceed L_min (2)"]


def test_sigma_one_resolves_to_cobb_douglas(tmp_path):
    cfg = parse_config(write(tmp_path, "[production]\nfamily = ces\nshare = 0.4\nsigma = 1\n"))
    assert isinstance(cfg.production.kernel, CobbDouglasKernel)
    assert cfg.production.kernel.alpha == 0.4
    assert "family = cobb_douglas" in cfg.resolved_lines()


def test_unknown_bias_kind(tmp_path):
    errs = errors_of(tmp_path, "[bias]\nkind = lucas\n")
    assert errs == ["line 2: unknown bias kind 'lucas' (choose none, harrod, hicks or solow)"]


def test_missing_file_reported(tmp_path):
    with pytest.raises(ConfigFileError, match="cannot read config file"):
        parse_config(tmp_path / "absent.cfg")
