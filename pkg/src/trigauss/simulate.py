"""Triangular-array simulation and Monte Carlo verification of the limit
laws.

One array row of size n draws row i with correlation
rho_ni = 1 - m(i/n)/log n; componentwise maxima over the row, normalized
through u_n(x) = b_n + x/b_n, are compared against the first-order limit
of the active regime plus its second-order correction.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import backend, limits, rng
from .errors import DomainError
from .normal import norming_constant
from .profiles import CorrelationProfile

DEFAULT_GRID: Tuple[Tuple[float, float], ...] = tuple(
    (x, y) for x in (-1.0, 0.0, 1.0, 2.0) for y in (-1.0, 0.0, 1.0, 2.0)
)

# Smallest correlation tolerated when auto-scheduling the independent
# regime; m is clipped so that rho_ni >= RHO_MIN.
RHO_MIN = -0.99


@dataclass(frozen=True)
class ArrayConfig:
    n: int
    profile: CorrelationProfile
    master_seed: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise DomainError(f"row length must be an integer >= 3, got {self.n}")
        # validates the rho range up front
        rho_schedule(self.profile, self.n)


def rho_schedule(profile: CorrelationProfile, n: int) -> np.ndarray:
    """Correlations rho_ni = 1 - m(i/n)/log n for i = 1..n."""
    if int(n) != n or n < 3:
        raise DomainError(f"schedule needs integer n >= 3, got {n}")
    log_n = math.log(n)
    t = np.arange(1, n + 1, dtype=float) / n
    m = np.asarray(profile.m(t), dtype=float)
    rho = 1.0 - m / log_n
    bad = np.nonzero((rho <= -1.0) | (rho >= 1.0))[0]
    if bad.size:
        i = int(bad[0]) + 1
        raise DomainError(
            f"rho_n{i} = {rho[bad[0]]:.6g} is outside (-1, 1); "
            f"m(i/n) = {m[bad[0]]:.6g} with log n = {log_n:.6g}"
        )
    return rho


def simulate_maxima(config: ArrayConfig, replication_index: int,
                    threads: int = 1) -> Tuple[float, float]:
    """(M_n1, M_n2) for one replication; pure function of
    (master_seed, replication_index)."""
    rho = rho_schedule(config.profile, config.n)
    m1, m2 = backend.maxima_batch(
        config.master_seed, rho, replication_index, 1,
        domain=rng.DOMAIN_ARRAY_SIM, threads=threads,
    )
    return float(m1[0]), float(m2[0])


def simulate_row(config: ArrayConfig, replication_index: int):
    """The full row (X_1..X_n, Y_1..Y_n) of one replication, for use as an
    inference dataset.  Uses a domain tag distinct from the maxima runs."""
    rho = rho_schedule(config.profile, config.n)
    return rng.bivariate_rows(
        config.master_seed, rng.DOMAIN_DATASETS, replication_index, rho
    )


@dataclass
class EmpiricalJointCDF:
    grid: List[Tuple[float, float]]
    u_values: List[Tuple[float, float]]
    estimates: np.ndarray
    stderr: np.ndarray
    replications: int


def empirical_joint_cdf(config: ArrayConfig, grid: Sequence[Tuple[float, float]],
                        R: int, threads: int = 1,
                        batch: int = 100_000) -> EmpiricalJointCDF:
    """Monte Carlo estimate of P(M_n1 <= u_n(x), M_n2 <= u_n(y)) on a grid.

    Counts are accumulated per batch (associative), so the result depends
    only on (config, grid, R).
    """
    if R < 100:
        raise DomainError(f"need at least 100 replications, got {R}")
    grid = [(float(x), float(y)) for x, y in grid]
    if not all(np.isfinite(g).all() for g in map(np.asarray, grid)):
        raise DomainError("grid points must be finite")
    nc = norming_constant(config.n)
    ux = np.array([nc.u(x) for x, _ in grid])
    uy = np.array([nc.u(y) for _, y in grid])
    rho = rho_schedule(config.profile, config.n)
    counts = np.zeros(len(grid), dtype=np.int64)
    done = 0
    while done < R:
        k = min(batch, R - done)
        m1, m2 = backend.maxima_batch(
            config.master_seed, rho, done, k,
            domain=rng.DOMAIN_ARRAY_SIM, threads=threads,
        )
        counts += np.count_nonzero(
            (m1[:, None] <= ux[None, :]) & (m2[:, None] <= uy[None, :]), axis=0
        )
        done += k
    p = counts / float(R)
    se = np.sqrt(p * (1.0 - p) / R)
    return EmpiricalJointCDF(
        grid=grid,
        u_values=[(float(a), float(b)) for a, b in zip(ux, uy)],
        estimates=p,
        stderr=se,
        replications=R,
    )


def scheduled_profile(regime: str, n: int) -> CorrelationProfile:
    """n-indexed constant profiles realizing the dependent/independent rate
    conditions at desk scale: (log n)^-5, and (log log n)^3 clipped so the
    correlation stays above RHO_MIN."""
    log_n = math.log(n)
    if regime == "dependent":
        return CorrelationProfile.constant(log_n ** -5)
    if regime == "independent":
        m = min(math.log(log_n) ** 3, (1.0 - RHO_MIN) * log_n)
        return CorrelationProfile.constant(m)
    raise DomainError(f"no scheduled profile for regime {regime!r}")


def _limit_and_correction(regime: str, profile: CorrelationProfile,
                          x: float, y: float, n: int) -> Tuple[float, float]:
    if regime == "mixed":
        lim = limits.limit_cdf_H(profile, x, y)
        corr = limits.correction_mixed(profile, x, y, n).value
    elif regime == "dependent":
        lim = float(limits.gumbel_cdf(min(x, y)))
        corr = limits.correction_dependent(x, y, n).value
    elif regime == "independent":
        lim = float(limits.gumbel_cdf(x) * limits.gumbel_cdf(y))
        corr = limits.correction_independent(x, y, n).value
    else:
        raise DomainError(f"unknown regime {regime!r}")
    return lim, corr


@dataclass
class DiagnosticRow:
    n: int
    x: float
    y: float
    empirical: float
    limit: float
    correction: float
    raw_error: float
    scaled_error: float
    corrected_error: float
    stderr: float


@dataclass
class ConvergenceReport:
    regime: str
    rows: List[DiagnosticRow] = field(default_factory=list)

    CSV_COLUMNS = ("n", "x", "y", "empirical", "limit", "correction",
                   "raw_error", "scaled_error", "corrected_error", "stderr")

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.CSV_COLUMNS) + "\n")
        for r in self.rows:
            buf.write(
                f"{r.n},{r.x!r},{r.y!r},{r.empirical!r},{r.limit!r},"
                f"{r.correction!r},{r.raw_error!r},{r.scaled_error!r},"
                f"{r.corrected_error!r},{r.stderr!r}\n"
            )
        return buf.getvalue()

    def mean_abs_raw(self) -> float:
        return float(np.mean([abs(r.raw_error) for r in self.rows]))

    def mean_abs_corrected(self) -> float:
        return float(np.mean([abs(r.corrected_error) for r in self.rows]))


def convergence_diagnostic(profile: Optional[CorrelationProfile],
                           grid: Sequence[Tuple[float, float]],
                           ns: Sequence[int], R: int, regime: str,
                           master_seed: int = 0,
                           threads: int = 1) -> ConvergenceReport:
    """Raw, rate-scaled, and correction-adjusted errors of the empirical
    joint CDF against the regime's limit, for each n and grid point.

    ``profile=None`` selects the scheduled n-indexed profiles for the
    dependent/independent regimes.
    """
    ns = [int(n) for n in ns]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise DomainError("n values must be strictly increasing")
    if regime not in ("mixed", "dependent", "independent"):
        raise DomainError(f"unknown diagnostic regime {regime!r}")
    if regime == "mixed":
        if profile is None:
            raise DomainError("mixed regime requires an explicit profile")
        if not profile.is_monotone:
            raise DomainError("mixed regime requires a monotone profile")
    report = ConvergenceReport(regime=regime)
    for n in ns:
        prof_n = profile if profile is not None else scheduled_profile(regime, n)
        config = ArrayConfig(n=n, profile=prof_n, master_seed=master_seed)
        emp = empirical_joint_cdf(config, grid, R, threads=threads)
        for (x, y), p, se in zip(emp.grid, emp.estimates, emp.stderr):
            lim, corr = _limit_and_correction(regime, prof_n, x, y, n)
            raw = p - lim
            rate = (math.log(math.log(n)) / math.log(n)
                    if regime == "mixed" else 1.0 / math.log(n))
            report.rows.append(DiagnosticRow(
                n=n, x=x, y=y, empirical=float(p), limit=lim, correction=corr,
                raw_error=float(raw), scaled_error=float(raw / rate),
                corrected_error=float(raw - corr), stderr=float(se),
            ))
    return report
