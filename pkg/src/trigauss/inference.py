"""Score-equation maximum likelihood for the correlation profile family
m(s) = alpha + beta * s^gamma, with asymptotic covariance matrices, Wald
intervals and a test of profile constancy.

Observations (X_i, Y_i), i = 1..n, are independent standard bivariate
Gaussian pairs with correlation rho_i = 1 - m(i/n)/log n.  The three score
statistics are weighted sums

    l_1 = sum_i w_i,   l_2 = sum_i w_i (i/n)^gamma,
    l_3 = sum_i w_i (i/n)^gamma log(i/n),

with per-observation weight

    w_i = rho_i / ((log n)(1 - rho_i^2))
        + (1 + rho_i^2) X_i Y_i / ((log n)(1 - rho_i^2)^2)
        - rho_i (X_i^2 + Y_i^2) / ((log n)(1 - rho_i^2)^2).

Sub-families fix parameters: constant (beta = 0, l_1 only) and linear
(gamma = 1, l_1 and l_2).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy import integrate as _sci_integrate

from .errors import DomainError, EstimationError
from .normal import std_normal_quantile, std_normal_sf
from .profiles import CorrelationProfile

FAMILIES = ("constant", "linear", "power")
_ACTIVE = {"constant": (0,), "linear": (0, 1), "power": (0, 1, 2)}
_PARAM_NAMES = ("alpha", "beta", "gamma")

SCORE_TOL = 1e-8
ALPHA_FLOOR = 1e-6
GAMMA_FLOOR = 1e-6
GAMMA_GRID = (0.25, 0.5, 1.0, 1.5, 2.0, 3.0)


class NonIdentifiabilityWarning(UserWarning):
    """beta indistinguishable from 0: gamma carries no information."""


def _as_xy(data) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(data, tuple) and len(data) == 2:
        x, y = (np.asarray(a, dtype=float) for a in data)
    else:
        arr = np.asarray(data, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise DomainError("data must be (x, y) arrays or an (n, 2) array")
        x, y = arr[:, 0], arr[:, 1]
    if x.shape != y.shape or x.ndim != 1:
        raise DomainError("x and y must be equal-length 1-d arrays")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise DomainError("data must be finite")
    if x.size < 3:
        raise DomainError("need at least 3 observations")
    return x, y


@dataclass(frozen=True)
class ScoreValue:
    l1: float
    l2: float
    l3: float

    def as_array(self, family: str = "power") -> np.ndarray:
        full = np.array([self.l1, self.l2, self.l3])
        return full[list(_ACTIVE[family])]


def _theta_to_m(theta, t):
    alpha, beta, gamma = theta
    return alpha + beta * np.power(t, gamma)


def score(theta, data, family: str = "power") -> ScoreValue:
    """The three score statistics at ``theta`` = (alpha, beta, gamma)."""
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}")
    x, y = _as_xy(data)
    n = x.size
    log_n = math.log(n)
    t = np.arange(1, n + 1, dtype=float) / n
    rho = 1.0 - _theta_to_m(theta, t) / log_n
    if np.any(np.abs(rho) >= 1.0):
        i = int(np.nonzero(np.abs(rho) >= 1.0)[0][0]) + 1
        raise DomainError(f"|rho_n{i}| >= 1 at theta={tuple(theta)}")
    one = 1.0 - rho * rho
    w = (rho / (log_n * one)
         + (1.0 + rho * rho) * x * y / (log_n * one * one)
         - rho * (x * x + y * y) / (log_n * one * one))
    gamma = theta[2]
    tg = np.power(t, gamma)
    return ScoreValue(
        l1=float(np.sum(w)),
        l2=float(np.sum(w * tg)),
        l3=float(np.sum(w * tg * np.log(t))),
    )


def _log_likelihood(theta, x, y, log_n, t) -> float:
    rho = 1.0 - _theta_to_m(theta, t) / log_n
    one = 1.0 - rho * rho
    return float(
        -0.5 * np.sum(np.log(one))
        - np.sum((x * x + y * y) / (2.0 * one))
        + np.sum(rho * x * y / one)
    )


# --- asymptotic covariance matrices ----------------------------------


def _entry(theta, p: int, q: int) -> float:
    alpha, beta, gamma = theta

    def f(t):
        m = alpha + beta * t ** gamma
        val = 1.0 / (2.0 * m * m)
        if p:
            val *= t ** (p * gamma)
        if q:
            val *= math.log(t) ** q
        return val

    val, _ = _sci_integrate.quad(f, 0.0, 1.0, epsabs=1e-12, epsrel=1e-12,
                                 limit=200)
    return val


def _check_profile_positive(theta):
    alpha, beta, gamma = theta
    if alpha <= 0 or gamma <= 0:
        raise DomainError(f"need alpha > 0 and gamma > 0, got {tuple(theta)}")
    if alpha + beta <= 0:
        raise DomainError(f"profile nonpositive at t=1 for theta={tuple(theta)}")


def sigma_matrix(theta) -> np.ndarray:
    """Limit covariance of (l1, l2, l3)/sqrt(n); nine profile integrals."""
    _check_profile_positive(theta)
    s11 = _entry(theta, 0, 0)
    s12 = _entry(theta, 1, 0)
    s13 = _entry(theta, 1, 1)
    s22 = _entry(theta, 2, 0)
    s23 = _entry(theta, 2, 1)
    s33 = _entry(theta, 2, 2)
    return np.array([[s11, s12, s13],
                     [s12, s22, s23],
                     [s13, s23, s33]])


def delta_hat_matrix(theta) -> np.ndarray:
    """Limit Jacobian of the scaled score: equal to sigma_matrix with the
    third column carrying an extra factor beta."""
    sig = sigma_matrix(theta)
    delta = sig.copy()
    delta[:, 2] *= theta[1]
    return delta


def linear_family_covariance(alpha: float, beta: float) -> np.ndarray:
    """Closed-form 2x2 limit covariance for the transformed linear-family
    statistics; the |beta| -> 0 branch switches to a log series."""
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if alpha + beta <= 0:
        raise DomainError(f"m(1) = {alpha + beta} must be positive")
    a, b = float(alpha), float(beta)
    s11 = 1.0 / (2.0 * a * (a + b))
    if abs(b) < 1e-4 * a:
        # 4-term expansions of log(1 + b/a); exact at b = 0
        s12 = (1.0 / (2.0 * a * (a + b)) - 1.0 / (4.0 * a * a)
               + b / (6.0 * a ** 3) - b * b / (8.0 * a ** 4))
        s22 = (1.0 / (6.0 * a * a) - b / (4.0 * a ** 3)
               + 3.0 * b * b / (10.0 * a ** 4))
    else:
        log1p = math.log1p(b / a)
        s12 = -1.0 / (2.0 * b * (a + b)) + log1p / (2.0 * b * b)
        s22 = (1.0 + a / (a + b) - 2.0 * a * log1p / b) / (2.0 * b * b)
    return np.array([[s11, s12], [s12, s22]])


# --- estimates --------------------------------------------------------


@dataclass
class ParamEstimate:
    alpha: float
    beta: float
    gamma: float
    family: str
    converged: bool
    iterations: int
    score_norm: float
    n: int
    avar: Optional[np.ndarray] = None
    avar_failure: Optional[str] = None

    @property
    def theta(self) -> Tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)

    def profile(self) -> CorrelationProfile:
        if self.family == "constant":
            return CorrelationProfile.constant(self.alpha)
        if self.family == "linear":
            return CorrelationProfile.linear(self.alpha, self.beta)
        return CorrelationProfile.power(self.alpha, self.beta, self.gamma)

    def active_names(self) -> Tuple[str, ...]:
        return tuple(_PARAM_NAMES[i] for i in _ACTIVE[self.family])

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "theta": {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma},
            "converged": self.converged,
            "iterations": self.iterations,
            "score_norm": self.score_norm,
            "n": self.n,
            "avar": None if self.avar is None else self.avar.tolist(),
        }


def constant_m_mle(data, n: Optional[int] = None) -> Tuple[float, float]:
    """One-parameter fit: rho_hat solves the constant-correlation score
    cubic, m_hat = (1 - rho_hat) log n."""
    x, y = _as_xy(data)
    if n is None:
        n = x.size
    if n < 3:
        raise DomainError(f"need n >= 3, got {n}")
    sxx = float(np.mean(x * x))
    syy = float(np.mean(y * y))
    sxy = float(np.mean(x * y))
    # rho(1 - rho^2) + (1 + rho^2) sxy - rho (sxx + syy) = 0
    roots = np.roots([-1.0, sxy, 1.0 - sxx - syy, sxy])
    real = roots[np.abs(roots.imag) < 1e-9].real
    inside = real[(real > -1.0) & (real < 1.0)]
    if inside.size == 0:
        raise EstimationError(
            f"constant-correlation score has no root in (-1, 1); "
            f"moments sxx={sxx:.4g}, syy={syy:.4g}, sxy={sxy:.4g}"
        )
    if inside.size > 1:
        log_n = math.log(n)
        t = np.arange(1, x.size + 1, dtype=float) / x.size
        lls = [_log_likelihood(((1.0 - r) * log_n, 0.0, 1.0), x, y, log_n, t)
               for r in inside]
        rho_hat = float(inside[int(np.argmax(lls))])
    else:
        rho_hat = float(inside[0])
    return rho_hat, (1.0 - rho_hat) * math.log(n)


def _feasible(theta, log_n) -> bool:
    alpha, beta, gamma = theta
    if alpha < ALPHA_FLOOR or gamma < GAMMA_FLOOR:
        return False
    m0, m1 = alpha, alpha + beta  # monotone family: endpoint values bound m
    lo, hi = min(m0, m1), max(m0, m1)
    return lo > 0 and hi < 2.0 * log_n


def _newton(theta0, data, family, max_iter=60):
    """Damped Newton on the active score components with a finite-difference
    Jacobian; steps violating the parameter constraints are backtracked."""
    x, y = _as_xy(data)
    log_n = math.log(x.size)
    active = list(_ACTIVE[family])
    theta = np.array(theta0, dtype=float)

    def f(th):
        return score(tuple(th), (x, y), family).as_array(family)

    fv = f(theta)
    iterations = 0
    for iterations in range(1, max_iter + 1):
        if np.linalg.norm(fv) <= SCORE_TOL:
            return theta, True, iterations - 1, float(np.linalg.norm(fv))
        # central-difference Jacobian in the active directions
        jac = np.empty((len(active), len(active)))
        for j, idx in enumerate(active):
            h = 1e-6 * max(1.0, abs(theta[idx]))
            tp, tm = theta.copy(), theta.copy()
            tp[idx] += h
            tm[idx] -= h
            if _feasible(tp, log_n) and _feasible(tm, log_n):
                jac[:, j] = (f(tp) - f(tm)) / (2.0 * h)
            elif _feasible(tp, log_n):  # one-sided at the boundary
                jac[:, j] = (f(tp) - fv) / h
            else:
                jac[:, j] = (fv - f(tm)) / h
        try:
            step = np.linalg.solve(jac, -fv)
        except np.linalg.LinAlgError:
            step = -np.linalg.lstsq(jac, fv, rcond=None)[0]
        lam = 1.0
        base_norm = np.linalg.norm(fv)
        accepted = False
        while lam > 1e-12:
            cand = theta.copy()
            for j, idx in enumerate(active):
                cand[idx] = theta[idx] + lam * step[j]
            if _feasible(cand, log_n):
                fc = f(cand)
                if np.linalg.norm(fc) < base_norm or lam <= 1e-10:
                    theta, fv = cand, fc
                    accepted = True
                    break
            lam *= 0.5
        if not accepted:
            break
    return theta, bool(np.linalg.norm(fv) <= SCORE_TOL), iterations, \
        float(np.linalg.norm(fv))


def _avar(theta, family: str, n: int):
    """Sandwich Delta^-1 Sigma Delta^-T / n on the active sub-block."""
    active = list(_ACTIVE[family])
    sig = sigma_matrix(theta)[np.ix_(active, active)]
    delta = delta_hat_matrix(theta)[np.ix_(active, active)]
    cond = np.linalg.cond(delta)
    if not np.isfinite(cond) or cond > 1e12:
        u, s, vt = np.linalg.svd(delta)
        direction = _PARAM_NAMES[active[int(np.argmax(np.abs(vt[-1])))]]
        return None, f"near-singular Jacobian along {direction} (cond={cond:.3g})"
    dinv = np.linalg.inv(delta)
    return dinv @ sig @ dinv.T / n, None


def mle_fit(data, family: str = "power", init=None) -> ParamEstimate:
    """Maximum likelihood fit of the requested profile family.

    Returns a non-converged estimate (with diagnostics) rather than raising
    when the iteration cap is hit.
    """
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}")
    x, y = _as_xy(data)
    n = x.size
    if n < 30:
        raise DomainError(f"need n >= 30 for identifiable fits, got {n}")
    log_n = math.log(n)

    rho_hat, m_hat = constant_m_mle((x, y), n)
    if family == "constant":
        theta = (max(m_hat, ALPHA_FLOOR), 0.0, 1.0)
        sn = abs(score(theta, (x, y), "constant").l1)
        avar, fail = _avar(theta, "constant", n)
        return ParamEstimate(alpha=theta[0], beta=0.0, gamma=1.0,
                             family="constant", converged=True, iterations=0,
                             score_norm=sn, n=n, avar=avar, avar_failure=fail)

    if init is not None:
        starts = [np.array(init, dtype=float)]
    elif family == "linear":
        starts = [np.array([max(m_hat, ALPHA_FLOOR), 0.0, 1.0])]
    else:
        # coarse gamma grid seeded by the constant fit; each start fixes
        # gamma and lets Newton move (alpha, beta) first
        starts = []
        for g in GAMMA_GRID:
            th0 = np.array([max(m_hat, ALPHA_FLOOR), 0.0, g])
            th_lin, _, _, _ = _newton(th0, (x, y), "linear")
            th_lin[2] = g
            starts.append(th_lin)
        t = np.arange(1, n + 1, dtype=float) / n
        lls = [_log_likelihood(tuple(th), x, y, log_n, t) for th in starts]
        starts = [starts[int(np.argmax(lls))]] + starts

    best = None
    for th0 in starts:
        if not _feasible(th0, log_n):
            continue
        theta, converged, iters, sn = _newton(th0, (x, y), family)
        if best is None or sn < best[3]:
            best = (theta, converged, iters, sn)
        if converged:
            best = (theta, converged, iters, sn)
            break
    if best is None:
        raise EstimationError("no feasible starting point for the fit")
    theta, converged, iters, sn = best
    alpha, beta, gamma = (float(theta[0]), float(theta[1]), float(theta[2]))
    if alpha + beta <= 0 or alpha <= 0:
        raise EstimationError(
            f"fitted profile touches 0 on [0,1]: alpha={alpha}, beta={beta}"
        )
    avar, fail = _avar((alpha, beta, gamma), family, n)
    est = ParamEstimate(alpha=alpha, beta=beta, gamma=gamma, family=family,
                        converged=converged, iterations=iters, score_norm=sn,
                        n=n, avar=avar, avar_failure=fail)
    if family == "power" and avar is not None:
        k = est.active_names().index("beta")
        se_beta = math.sqrt(max(avar[k, k], 0.0))
        if se_beta > 0 and abs(beta) < 1.96 * se_beta:
            warnings.warn(
                "beta is not significantly different from 0; "
                "gamma is not identified in the power family",
                NonIdentifiabilityWarning,
            )
    return est


# --- Wald reports and the constancy test ------------------------------


@dataclass
class WaldInterval:
    name: str
    estimate: float
    stderr: float
    lower: float
    upper: float
    z: float
    p_value: float


@dataclass
class WaldReport:
    level: float
    intervals: List[WaldInterval] = field(default_factory=list)

    def __getitem__(self, name: str) -> WaldInterval:
        for iv in self.intervals:
            if iv.name == name:
                return iv
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "parameters": {
                iv.name: {
                    "estimate": iv.estimate, "stderr": iv.stderr,
                    "ci": [iv.lower, iv.upper], "z": iv.z,
                    "p_value": iv.p_value,
                } for iv in self.intervals
            },
        }


def wald_report(estimate: ParamEstimate, level: float = 0.95,
                null=None) -> WaldReport:
    """Per-parameter normal-approximation intervals and z statistics."""
    if not (0.0 < level < 1.0):
        raise DomainError(f"level must be in (0,1), got {level}")
    if not estimate.converged:
        raise DomainError("Wald report requires a converged estimate")
    if estimate.avar is None:
        raise DomainError(
            f"asymptotic covariance unavailable: {estimate.avar_failure}"
        )
    names = estimate.active_names()
    if null is None:
        null = {name: 0.0 for name in names}
    mult = std_normal_quantile(0.5 * (1.0 + level))
    values = {"alpha": estimate.alpha, "beta": estimate.beta,
              "gamma": estimate.gamma}
    report = WaldReport(level=level)
    for k, name in enumerate(names):
        var = float(estimate.avar[k, k])
        if var < 0 and var > -1e-15:
            var = 0.0
        if var < 0:
            raise DomainError(f"negative variance estimate for {name}")
        se = math.sqrt(var)
        est = values[name]
        z = float("inf") if se == 0 and est != null.get(name, 0.0) else (
            0.0 if se == 0 else (est - null.get(name, 0.0)) / se)
        p = float(2.0 * std_normal_sf(abs(z))) if np.isfinite(z) else 0.0
        report.intervals.append(WaldInterval(
            name=name, estimate=est, stderr=se,
            lower=est - mult * se, upper=est + mult * se, z=z, p_value=p,
        ))
    return report


@dataclass
class ConstancyTest:
    alpha_hat: float
    beta_hat: float
    se_beta: float
    z: float
    p_value: float
    converged: bool

    def to_dict(self) -> dict:
        return {
            "alpha_hat": self.alpha_hat, "beta_hat": self.beta_hat,
            "se_beta": self.se_beta, "z": self.z, "p_value": self.p_value,
            "converged": self.converged,
        }


def test_constant_m(data) -> ConstancyTest:
    """Test H0: beta = 0 in the linear family, i.e. the classical
    constant-correlation (i.i.d.) condition."""
    x, y = _as_xy(data)
    if x.size < 30:
        raise DomainError(f"need n >= 30, got {x.size}")
    est = mle_fit((x, y), family="linear")
    rep = wald_report(est, level=0.95)
    iv = rep["beta"]
    return ConstancyTest(alpha_hat=est.alpha, beta_hat=est.beta,
                         se_beta=iv.stderr, z=iv.z, p_value=iv.p_value,
                         converged=est.converged)
