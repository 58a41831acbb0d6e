"""Constant-returns production technologies with explicit technical-change bias.

A technology here is a degree-1 kernel f(K, L) together with a bias that says
where the exponential augmentation factor A(t) = e^{rate*t} enters:

* labor-augmenting (Harrod):    Y = f(K, A(t)*L)
* capital-augmenting (Solow):   Y = f(A(t)*K, L)
* output-augmenting (Hicks):    Y = A(t)*f(K, L)
* none:                         Y = f(K, L)

All operations accept scalars or numpy arrays and broadcast elementwise.
Marginal products are exact closed forms for the built-in families; custom
kernels fall back to central finite differences.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .errors import ConfigurationError, DomainError

__all__ = [
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
]

# Central-difference step scale for kernels without closed-form gradients:
# h = max(|x|, 1) * eps^(1/3) balances truncation against roundoff for a
# second-order difference of a smooth function.
_FD_STEP = float(np.finfo(float).eps) ** (1.0 / 3.0)


class BiasKind(enum.Enum):
    """Where the augmentation factor enters the technology."""

    NONE = "none"
    HARROD = "harrod"
    HICKS = "hicks"
    SOLOW = "solow"


@dataclass(frozen=True)
class TechBias:
    """Technical change: a bias kind and a constant exponential rate.

    Parameters
    ----------
    kind : BiasKind
        Which argument the factor e^{rate*t} multiplies.
    rate : float
        Growth rate of the augmentation factor, per unit time. Ignored
        (treated as 0) when ``kind`` is ``BiasKind.NONE``.
    """

    kind: BiasKind = BiasKind.NONE
    rate: float = 0.0

    def __post_init__(self) -> None:
        if not isinstance(self.kind, BiasKind):
            raise ConfigurationError(f"bias kind must be a BiasKind, got {self.kind!r}")
        if not math.isfinite(self.rate):
            raise ConfigurationError(f"bias rate must be finite, got {self.rate!r}")

    @property
    def effective_rate(self) -> float:
        """The rate actually applied: 0 for kind NONE, ``rate`` otherwise."""
        return 0.0 if self.kind is BiasKind.NONE else self.rate

    def factor(self, t):
        """Augmentation factor A(t) = e^{rate*t} (identically 1 for NONE)."""
        if self.kind is BiasKind.NONE:
            return np.ones_like(np.asarray(t, dtype=float)) if np.ndim(t) else 1.0
        return np.exp(self.rate * t)


class MarginalProducts(NamedTuple):
    """Partial derivatives of Y = f(K, L, t) at a point."""

    f_K: float
    f_L: float
    f_t: float


# ---------------------------------------------------------------------------
# Degree-1 kernels: f(K, L) with exact or finite-difference gradients.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CobbDouglasKernel:
    """f(K, L) = K^alpha * L^(1-alpha), alpha in (0, 1)."""

    alpha: float
    family = "cobb_douglas"

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha < 1.0) or not math.isfinite(self.alpha):
            raise ConfigurationError(f"alpha out of range (0,1): got {self.alpha!r}")

    def value(self, K, L):
        return K ** self.alpha * L ** (1.0 - self.alpha)

    def gradient(self, K, L):
        f = self.value(K, L)
        return self.alpha * f / K, (1.0 - self.alpha) * f / L


@dataclass(frozen=True)
class CESKernel:
    """f(K, L) = (share*K^r + (1-share)*L^r)^(1/r) with r = (sigma-1)/sigma.

    sigma is the elasticity of substitution; sigma = 1 is the removable
    Cobb-Douglas singularity and is rejected here (the :func:`ces` factory
    routes it to :class:`CobbDouglasKernel` instead).
    """

    share: float
    sigma: float
    family = "ces"

    def __post_init__(self) -> None:
        if not (0.0 < self.share < 1.0) or not math.isfinite(self.share):
            raise ConfigurationError(f"share out of range (0,1): got {self.share!r}")
        if not (self.sigma > 0.0) or not math.isfinite(self.sigma):
            raise ConfigurationError(f"sigma must be > 0, got {self.sigma!r}")
        if self.sigma == 1.0:
            raise ConfigurationError(
                "sigma = 1 is the Cobb-Douglas limit; use the ces() factory, "
                "which routes it to CobbDouglasKernel(alpha=share)"
            )

    @property
    def r(self) -> float:
        return (self.sigma - 1.0) / self.sigma

    def value(self, K, L):
        r = self.r
        return (self.share * K ** r + (1.0 - self.share) * L ** r) ** (1.0 / r)

    def gradient(self, K, L):
        # Differentiating the CES aggregate gives f_X = w_X * X^(r-1) * f^(1-r)
        # for weight w_X on input X; degree-1 homogeneity is then immediate
        # from w_K*K^r + w_L*L^r = f^r (Euler's theorem holds exactly).
        r = self.r
        common = self.value(K, L) ** (1.0 - r)
        f_K = self.share * K ** (r - 1.0) * common
        f_L = (1.0 - self.share) * L ** (r - 1.0) * common
        return f_K, f_L


@dataclass(frozen=True)
class CustomKernel:
    """User-supplied scalar kernel, assumed homogeneous of degree 1.

    Gradients come from central finite differences with step
    h = max(|x|, 1) * eps^(1/3) per coordinate.
    """

    fn: Callable = field(repr=False)
    family = "custom"

    def value(self, K, L):
        return self.fn(K, L)

    def gradient(self, K, L):
        hK = np.maximum(np.abs(K), 1.0) * _FD_STEP
        hL = np.maximum(np.abs(L), 1.0) * _FD_STEP
        f_K = (self.fn(K + hK, L) - self.fn(K - hK, L)) / (2.0 * hK)
        f_L = (self.fn(K, L + hL) - self.fn(K, L - hL)) / (2.0 * hL)
        return f_K, f_L


# ---------------------------------------------------------------------------
# Biased technology.
# ---------------------------------------------------------------------------


def _check_point(K, L) -> None:
    if np.any(np.asarray(K) <= 0.0) or np.any(np.asarray(L) <= 0.0):
        raise DomainError(f"K and L must be strictly positive, got K={K!r}, L={L!r}")


@dataclass(frozen=True)
class ProductionFunction:
    """A degree-1 kernel plus a technical-change bias: Y = f(K, L, t).

    Instances are immutable and safe to share across threads; every method
    is a pure function of its arguments.
    """

    kernel: CobbDouglasKernel | CESKernel | CustomKernel
    bias: TechBias = TechBias()

    def evaluate(self, K, L, t):
        """Output Y at (K, L, t) with the bias applied.

        Raises
        ------
        DomainError
            If K or L is not strictly positive.
        """
        _check_point(K, L)
        kind = self.bias.kind
        if kind is BiasKind.NONE:
            return self.kernel.value(K, L)
        A = np.exp(self.bias.rate * t)
        if kind is BiasKind.HARROD:
            return self.kernel.value(K, L * A)
        if kind is BiasKind.SOLOW:
            return self.kernel.value(K * A, L)
        return A * self.kernel.value(K, L)  # Hicks

    def marginal_products(self, K, L, t) -> MarginalProducts:
        """Exact partials (f_K, f_L, f_t) of the biased technology.

        The time partial follows from the chain rule through A(t) = e^{g*t}:
        Harrod gives f_t = rate * (L*A) * f_2(K, L*A), Solow gives
        f_t = rate * (K*A) * f_1(K*A, L), Hicks gives f_t = rate * Y.
        """
        _check_point(K, L)
        kind = self.bias.kind
        if kind is BiasKind.NONE:
            f_K, f_L = self.kernel.gradient(K, L)
            zero = np.zeros_like(np.asarray(K, dtype=float)) if np.ndim(K) else 0.0
            return MarginalProducts(f_K, f_L, zero)
        rate = self.bias.rate
        A = np.exp(rate * t)
        if kind is BiasKind.HARROD:
            g1, g2 = self.kernel.gradient(K, L * A)
            return MarginalProducts(g1, A * g2, rate * (L * A) * g2)
        if kind is BiasKind.SOLOW:
            g1, g2 = self.kernel.gradient(K * A, L)
            return MarginalProducts(A * g1, g2, rate * (K * A) * g1)
        g1, g2 = self.kernel.gradient(K, L)  # Hicks
        return MarginalProducts(A * g1, A * g2, rate * A * self.kernel.value(K, L))

    def factor_shares(self, K, L, t):
        """(share_K, share_L) = (f_K*K/Y, f_L*L/Y); they sum to 1 for degree-1 f."""
        Y = self.evaluate(K, L, t)
        mp = self.marginal_products(K, L, t)
        return mp.f_K * K / Y, mp.f_L * L / Y

    def euler_residual(self, K, L, t):
        """Signed relative Euler gap (f_K*K + f_L*L - Y)/Y.

        Zero (to roundoff) exactly when the kernel is homogeneous of degree 1;
        a kernel of degree d returns d - 1.
        """
        Y = self.evaluate(K, L, t)
        mp = self.marginal_products(K, L, t)
        return (mp.f_K * K + mp.f_L * L - Y) / Y

    def homogeneity_check(self, K, L, t, lambdas) -> float:
        """Max over lambda of |f(lam*K, lam*L, t) - lam*f(K, L, t)| / (lam*f)."""
        lams = [float(lam) for lam in lambdas]
        if not lams:
            raise ConfigurationError("lambdas must be a nonempty sequence")
        if any(lam <= 0.0 for lam in lams):
            raise ConfigurationError(f"lambdas must be positive, got {lams!r}")
        base = self.evaluate(K, L, t)
        worst = 0.0
        for lam in lams:
            scaled = self.evaluate(lam * K, lam * L, t)
            dev = np.max(np.abs(scaled - lam * base) / (lam * base))
            worst = max(worst, float(dev))
        return worst

    def describe(self) -> str:
        """Short human-readable label, e.g. 'ces(share=0.25, sigma=2) + hicks(0.02)'."""
        k = self.kernel
        if isinstance(k, CobbDouglasKernel):
            fam = f"cobb_douglas(alpha={k.alpha:g})"
        elif isinstance(k, CESKernel):
            fam = f"ces(share={k.share:g}, sigma={k.sigma:g})"
        else:
            fam = "custom"
        if self.bias.kind is BiasKind.NONE:
            return fam
        return f"{fam} + {self.bias.kind.value}({self.bias.rate:g})"


# ---------------------------------------------------------------------------
# Factories.
# ---------------------------------------------------------------------------


def cobb_douglas(alpha: float, bias: TechBias | None = None) -> ProductionFunction:
    """Cobb-Douglas technology K^alpha * L^(1-alpha) with an optional bias."""
    return ProductionFunction(CobbDouglasKernel(alpha), bias or TechBias())


def ces(share: float, sigma: float, bias: TechBias | None = None) -> ProductionFunction:
    """CES technology; sigma = 1 collapses to Cobb-Douglas with alpha = share."""
    if sigma == 1.0:
        return cobb_douglas(share, bias)
    return ProductionFunction(CESKernel(share, sigma), bias or TechBias())


def custom(fn: Callable, bias: TechBias | None = None) -> ProductionFunction:
    """Wrap a user-supplied degree-1 kernel f(K, L)."""
    if not callable(fn):
        raise ConfigurationError(f"custom kernel must be callable, got {fn!r}")
    return ProductionFunction(CustomKernel(fn), bias or TechBias())
