"""Correlation profiles m(t) on [0,1].

The profile drives the row-varying correlation rho_ni = 1 - m(i/n)/log n.
Supported families: constant m = alpha, linear m = alpha + beta*t, power
m = alpha + beta*t^gamma, and tabulated knots with piecewise-linear
interpolation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import ProfileError

FAMILIES = ("constant", "linear", "power", "tabulated")


@dataclass(frozen=True)
class CorrelationProfile:
    kind: str
    alpha: float = 1.0
    beta: float = 0.0
    gamma: float = 1.0
    table: Optional[Tuple[Tuple[float, float], ...]] = None

    def __post_init__(self):
        if self.kind not in FAMILIES:
            raise ProfileError(f"unknown profile kind {self.kind!r}")
        if self.kind == "tabulated":
            self._validate_table()
            return
        if not np.isfinite([self.alpha, self.beta, self.gamma]).all():
            raise ProfileError("profile parameters must be finite")
        if self.alpha <= 0:
            raise ProfileError(f"alpha must be positive, got {self.alpha}")
        if self.kind == "constant" and self.beta != 0.0:
            raise ProfileError("constant profile requires beta = 0")
        if self.kind == "linear" and self.gamma != 1.0:
            raise ProfileError("linear profile requires gamma = 1")
        if self.kind in ("linear", "power") and self.gamma <= 0:
            raise ProfileError(f"gamma must be positive, got {self.gamma}")
        # beta*t^gamma is monotone in t, so positivity at the endpoints
        # gives positivity on all of [0,1].
        if self.alpha + self.beta <= 0:
            raise ProfileError(
                f"m(1) = alpha + beta = {self.alpha + self.beta} is not positive"
            )

    def _validate_table(self):
        if not self.table or len(self.table) < 2:
            raise ProfileError("tabulated profile needs at least two knots")
        ts = np.array([t for t, _ in self.table], dtype=float)
        ms = np.array([m for _, m in self.table], dtype=float)
        if not (np.isfinite(ts).all() and np.isfinite(ms).all()):
            raise ProfileError("table knots must be finite")
        if np.any(np.diff(ts) <= 0):
            raise ProfileError("table knot positions must be strictly increasing")
        if ts[0] != 0.0 or ts[-1] != 1.0:
            raise ProfileError("table must cover t=0 and t=1")
        if np.any(ms <= 0):
            raise ProfileError("tabulated m values must be positive")

    # --- constructors -------------------------------------------------

    @classmethod
    def constant(cls, alpha: float) -> "CorrelationProfile":
        return cls(kind="constant", alpha=alpha, beta=0.0, gamma=1.0)

    @classmethod
    def linear(cls, alpha: float, beta: float) -> "CorrelationProfile":
        return cls(kind="linear", alpha=alpha, beta=beta, gamma=1.0)

    @classmethod
    def power(cls, alpha: float, beta: float, gamma: float) -> "CorrelationProfile":
        return cls(kind="power", alpha=alpha, beta=beta, gamma=gamma)

    @classmethod
    def tabulated(cls, knots: Sequence[Tuple[float, float]]) -> "CorrelationProfile":
        return cls(kind="tabulated", table=tuple((float(t), float(m)) for t, m in knots))

    # --- evaluation ---------------------------------------------------

    def m(self, t):
        """Evaluate m(t) for scalar or array t in [0,1]."""
        t_arr = np.asarray(t, dtype=float)
        if np.any((t_arr < 0) | (t_arr > 1)):
            raise ProfileError("profile argument must lie in [0,1]")
        if self.kind == "tabulated":
            ts = np.array([k[0] for k in self.table])
            ms = np.array([k[1] for k in self.table])
            out = np.interp(t_arr, ts, ms)
        elif self.kind == "constant":
            out = np.full_like(t_arr, self.alpha, dtype=float)
        else:
            out = self.alpha + self.beta * np.power(t_arr, self.gamma)
        return float(out) if out.ndim == 0 else out

    @property
    def is_monotone(self) -> bool:
        if self.kind == "tabulated":
            dm = np.diff([k[1] for k in self.table])
            return bool(np.all(dm >= 0) or np.all(dm <= 0))
        return True  # constant/linear/power families are monotone in t

    def m_range(self) -> Tuple[float, float]:
        """(min, max) of m over [0,1]."""
        if self.kind == "tabulated":
            ms = [k[1] for k in self.table]
            return float(min(ms)), float(max(ms))
        ends = (self.m(0.0), self.m(1.0))
        return min(ends), max(ends)

    def describe(self) -> dict:
        if self.kind == "tabulated":
            return {"kind": self.kind, "table": list(map(list, self.table))}
        d = {"kind": self.kind, "alpha": self.alpha}
        if self.kind != "constant":
            d["beta"] = self.beta
        if self.kind == "power":
            d["gamma"] = self.gamma
        return d
