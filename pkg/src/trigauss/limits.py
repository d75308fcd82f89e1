"""Limit distributions for normalized bivariate Gaussian maxima and their
second-order correction terms.

Three first-order limits arise depending on how the correlation profile
m behaves: the comonotone Gumbel limit (m -> 0), the independent product
limit (m -> infinity), and for fixed continuous positive m the mixed law

    H(x,y) = exp( -e^{-y} I(x-y) - e^{-x} I(y-x) ),
    I(d)   = integral_0^1 Phi( sqrt(m(t)) + d / (2 sqrt(m(t))) ) dt.

Each regime carries a second-order correction of the finite-n joint CDF,
with an explicit rate factor in n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .normal import norming_constant, std_normal_cdf, std_normal_pdf
from .profiles import CorrelationProfile
from .quadrature import integrate

REGIMES = ("mixed", "dependent", "independent", "univariate")


def gumbel_cdf(x):
    """The Gumbel law exp(-e^(-x))."""
    x = np.asarray(x, dtype=float)
    out = np.exp(-np.exp(-x))
    return float(out) if out.ndim == 0 else out


def hr_cdf(lam: float, x: float, y: float) -> float:
    """Bivariate max-stable law with dependence parameter lam in [0, inf].

    lam = 0 is the comonotone branch Gumbel(min(x,y)); lam = inf is the
    independent product Gumbel(x)Gumbel(y).
    """
    if math.isnan(lam) or lam < 0:
        raise DomainError(f"dependence parameter must be >= 0, got {lam}")
    if not (np.isfinite(x) and np.isfinite(y)):
        raise DomainError("arguments must be finite")
    if lam == 0:
        return float(gumbel_cdf(min(x, y)))
    if math.isinf(lam):
        return float(gumbel_cdf(x) * gumbel_cdf(y))
    a = std_normal_cdf(lam + (x - y) / (2.0 * lam))
    b = std_normal_cdf(lam + (y - x) / (2.0 * lam))
    return math.exp(-a * math.exp(-y) - b * math.exp(-x))


def _profile_cdf_integral(profile: CorrelationProfile, d: float,
                          tol: float = 1e-10) -> float:
    """integral_0^1 Phi( sqrt(m(t)) + d / (2 sqrt(m(t))) ) dt."""

    def f(t):
        r = np.sqrt(profile.m(t))
        return std_normal_cdf(r + d / (2.0 * r))

    return integrate(f, 0.0, 1.0, tol=tol)


def limit_cdf_H(profile: CorrelationProfile, x: float, y: float,
                tol: float = 1e-10) -> float:
    """First-order mixed limit H(x,y) for a continuous positive profile."""
    if not (np.isfinite(x) and np.isfinite(y)):
        raise DomainError("arguments must be finite")
    ia = _profile_cdf_integral(profile, x - y, tol)
    ib = _profile_cdf_integral(profile, y - x, tol)
    return math.exp(-math.exp(-y) * ia - math.exp(-x) * ib)


@dataclass(frozen=True)
class CorrectionTerm:
    """A second-order correction: value = rate_factor * limit coefficient."""

    regime: str
    value: float
    rate_factor: float

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise DomainError(f"unknown regime {self.regime!r}")
        if not np.isfinite(self.value):
            raise DomainError("correction value must be finite")


def _check_n(n: int, minimum: int = 3):
    if int(n) != n or n < minimum:
        raise DomainError(f"n must be an integer >= {minimum}, got {n}")


def correction_mixed(profile: CorrelationProfile, x: float, y: float,
                     n: int, tol: float = 1e-10) -> CorrectionTerm:
    """Leading error of the finite-n joint CDF around H(x,y); requires a
    monotone continuous profile and n >= 16 (so log log n > 0)."""
    _check_n(n, minimum=16)
    if not profile.is_monotone:
        raise DomainError("mixed-regime correction requires a monotone profile")
    rate = math.log(math.log(n)) / math.log(n)

    def f(t):
        r = np.sqrt(profile.m(t))
        return r * std_normal_pdf(r + (y - x) / (2.0 * r))

    coeff = 0.5 * integrate(f, 0.0, 1.0, tol=tol) * math.exp(-x) \
        * limit_cdf_H(profile, x, y, tol)
    return CorrectionTerm(regime="mixed", value=rate * coeff, rate_factor=rate)


def correction_dependent(x: float, y: float, n: int) -> CorrectionTerm:
    """Leading error around the comonotone Gumbel limit (m -> 0 fast)."""
    _check_n(n)
    rate = 1.0 / math.log(n)
    q = min(x, y)
    coeff = 0.25 * (q * q + 2.0 * q) * math.exp(-q) * float(gumbel_cdf(q))
    return CorrectionTerm(regime="dependent", value=rate * coeff, rate_factor=rate)


def correction_independent(x: float, y: float, n: int) -> CorrectionTerm:
    """Leading error around the independent product limit (m -> infinity)."""
    _check_n(n)
    rate = 1.0 / math.log(n)
    coeff = (
        0.25 * (x * x + 2.0 * x) * math.exp(-x)
        + 0.25 * (y * y + 2.0 * y) * math.exp(-y)
    ) * float(gumbel_cdf(x)) * float(gumbel_cdf(y))
    return CorrectionTerm(regime="independent", value=rate * coeff, rate_factor=rate)


def correction_univariate(x: float, n: int) -> CorrectionTerm:
    """Univariate tail correction: b_n^2 (e^{-x} - n(1 - Phi(u_n(x)))) tends
    to (x^2 + 2x)/2 * e^{-x}; value is that coefficient scaled by b_n^{-2}."""
    _check_n(n)
    b = norming_constant(n).b_n
    rate = 1.0 / (b * b)
    coeff = 0.5 * (x * x + 2.0 * x) * math.exp(-x)
    return CorrectionTerm(regime="univariate", value=rate * coeff, rate_factor=rate)
