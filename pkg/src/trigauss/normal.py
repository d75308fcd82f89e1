"""Standard Gaussian primitives and the norming constant b_n.

The CDF goes through the complementary error function so that tail
probabilities of size 1/n keep full relative accuracy; b_n is the upper
1/n quantile, solved by Newton iteration started from its two-term
log-expansion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError
from .rng import PairStream

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _check_finite(x, name: str = "x"):
    if not np.all(np.isfinite(x)):
        raise DomainError(f"{name} must be finite, got {x}")


def std_normal_cdf(x):
    """Phi(x).  Accepts scalars or arrays; relative tail accuracy ~1e-15."""
    _check_finite(x)
    if np.isscalar(x):
        return 0.5 * math.erfc(-x / _SQRT2)
    return 0.5 * special.erfc(-np.asarray(x, dtype=float) / _SQRT2)


def std_normal_sf(x):
    """Upper tail 1 - Phi(x) with full relative accuracy."""
    _check_finite(x)
    if np.isscalar(x):
        return 0.5 * math.erfc(x / _SQRT2)
    return 0.5 * special.erfc(np.asarray(x, dtype=float) / _SQRT2)


def std_normal_pdf(x):
    """phi(x)."""
    _check_finite(x)
    x = np.asarray(x, dtype=float) if not np.isscalar(x) else x
    out = _INV_SQRT_2PI * np.exp(-0.5 * np.square(x))
    return float(out) if np.isscalar(x) else out


def std_normal_quantile(p):
    """Inverse of Phi on (0,1)."""
    p_arr = np.asarray(p, dtype=float)
    if not np.all((p_arr > 0.0) & (p_arr < 1.0)):
        raise DomainError(f"quantile needs p in (0,1), got {p}")
    out = special.ndtri(p_arr)
    return float(out) if np.isscalar(p) else out


@dataclass(frozen=True)
class NormingConstant:
    """The solution b_n of 1 - Phi(b_n) = 1/n, n >= 3."""

    n: int
    b_n: float

    def u(self, x):
        """The norming transform u_n(x) = b_n + x / b_n."""
        out = self.b_n + np.asarray(x, dtype=float) / self.b_n
        return float(out) if out.ndim == 0 else out


def norming_constant_expansion(n: int) -> float:
    """Two-term asymptotic value (2 log n)^(1/2) - (log log n + log 4pi) /
    (2 (2 log n)^(1/2)); diagnostic companion to the exact root."""
    if n < 3:
        raise DomainError(f"norming constant needs n >= 3, got {n}")
    two_log_n = 2.0 * math.log(n)
    root = math.sqrt(two_log_n)
    return root - (math.log(math.log(n)) + math.log(4.0 * math.pi)) / (2.0 * root)


def norming_constant(n: int) -> NormingConstant:
    """Solve 1 - Phi(b) = 1/n by Newton from the expansion start."""
    if int(n) != n or n < 3:
        raise DomainError(f"norming constant needs integer n >= 3, got {n}")
    n = int(n)
    target = 1.0 / n
    b = norming_constant_expansion(n)
    for _ in range(60):
        g = std_normal_sf(b) - target
        step = g / std_normal_pdf(b)
        b = b + step
        if abs(step) <= 1e-14 * max(1.0, b):
            break
    else:
        raise DomainError(f"norming constant iteration failed for n={n}")
    return NormingConstant(n=n, b_n=b)


def sample_bivariate_gauss(rho: float, stream: PairStream):
    """One standard bivariate Gaussian pair with correlation ``rho`` from a
    caller-owned counter stream."""
    if not np.isfinite(rho):
        raise DomainError("rho must be finite")
    return stream.draw_pair(rho)
