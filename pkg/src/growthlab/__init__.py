"""growthlab: a numerical laboratory for balanced growth.

The package simulates one-sector accumulation dynamics under factor-neutral
and factor-augmenting technical change, detects balanced growth paths, and
checks the detected outcomes against the classification theorem: steady
growth is possible exactly when technical change admits a constant-rate
labor-augmenting representation. Alongside the growth model it carries a
small transport-equation toolkit (the first-order PDE whose characteristics
express the labor-augmenting form) and a convergence-timescale estimator.
"""

from .bgp import (
    BGPReport,
    MatrixCell,
    UzawaVerdict,
    Verdict,
    bgp_condition_residual,
    classification_matrix,
    detect_bgp,
    equivalent_harrod_rate,
    uzawa_verdict,
    verify_harrod_form,
)
from .config import (
    OutputSettings,
    PDESettings,
    RunSettings,
    ScenarioConfig,
    parse_config,
)
from .dynamics import (
    CSV_HEADER,
    ModelParams,
    Trajectory,
    effective_units,
    growth_accounting_residual,
    simulate,
)
from .errors import (
    AnalysisError,
    ConfigFileError,
    ConfigurationError,
    DomainError,
    GrowthLabError,
    IntegrationError,
    NumericalOverflowError,
    OutOfDomainError,
)
from .production import (
    BiasKind,
    CESKernel,
    CobbDouglasKernel,
    CustomKernel,
    MarginalProducts,
    ProductionFunction,
    TechBias,
    ces,
    cobb_douglas,
    custom,
)
from .timescale import (
    TimescaleReport,
    analytic_cd_rate,
    convergence_rate,
    steady_state_effective_capital,
)
from .transport import (
    AdvectivePDE,
    GridSolution,
    characteristic_residual,
    solve_characteristics,
    solve_upwind,
    verify_corollary_on_trajectory,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "GrowthLabError",
    "DomainError",
    "OutOfDomainError",
    "ConfigurationError",
    "ConfigFileError",
    "IntegrationError",
    "NumericalOverflowError",
    "AnalysisError",
    # production technology
    "BiasKind",
    "TechBias",
    "MarginalProducts",
    "CobbDouglasKernel",
    "CESKernel",
    "CustomKernel",
    "ProductionFunction",
    "cobb_douglas",
    "ces",
    "custom",
    # dynamics
    "ModelParams",
    "Trajectory",
    "simulate",
    "growth_accounting_residual",
    "effective_units",
    "CSV_HEADER",
    # balanced growth
    "Verdict",
    "BGPReport",
    "UzawaVerdict",
    "MatrixCell",
    "detect_bgp",
    "bgp_condition_residual",
    "equivalent_harrod_rate",
    "uzawa_verdict",
    "verify_harrod_form",
    "classification_matrix",
    # transport
    "AdvectivePDE",
    "GridSolution",
    "solve_characteristics",
    "solve_upwind",
    "characteristic_residual",
    "verify_corollary_on_trajectory",
    # timescale
    "TimescaleReport",
    "steady_state_effective_capital",
    "convergence_rate",
    "analytic_cd_rate",
    # scenario files
    "ScenarioConfig",
    "RunSettings",
    "PDESettings",
    "OutputSettings",
    "parse_config",
]
