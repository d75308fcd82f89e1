"""Backend selection for the maxima simulation kernel.

The compiled Cython kernel is used when the extension built; otherwise a
vectorized NumPy implementation takes over.  Both produce bitwise-identical
results (verified in the test suite), so backend choice never changes any
output.  ``TRIGAUSS_BACKEND=pure`` forces the fallback.
"""

from __future__ import annotations

import os

import numpy as np
from scipy.special import ndtri

from . import rng

try:
    from . import _maxkernel

    HAVE_COMPILED = True
except ImportError:  # pragma: no cover - depends on build environment
    _maxkernel = None
    HAVE_COMPILED = False


def _pure_maxima_batch(master_seed: int, rho: np.ndarray, rep_start: int,
                       n_reps: int, domain: int, chunk_elems: int = 4_000_000):
    """NumPy twin of the compiled kernel, vectorized over (replication, row)
    blocks; memory is bounded by ``chunk_elems`` counters per block."""
    n = rho.size
    k0, k1 = rng._split_seed(master_seed)
    s = np.sqrt(1.0 - rho * rho)
    m1 = np.empty(n_reps)
    m2 = np.empty(n_reps)
    reps_per_chunk = max(1, chunk_elems // max(n, 1))
    idx = np.arange(n, dtype=np.uint32)
    done = 0
    while done < n_reps:
        k = min(reps_per_chunk, n_reps - done)
        reps = rep_start + done + np.arange(k, dtype=np.uint64)
        c0 = np.broadcast_to(idx, (k, n))
        c1 = (reps & np.uint64(0xFFFFFFFF)).astype(np.uint32)[:, None]
        c2 = (reps >> np.uint64(32)).astype(np.uint32)[:, None]
        c1 = np.broadcast_to(c1, (k, n))
        c2 = np.broadcast_to(c2, (k, n))
        x0, x1, x2, x3 = rng.philox4x32(c0, c1, c2, np.uint32(domain), k0, k1)
        u64a = (x0.astype(np.uint64) << np.uint64(32)) | x1.astype(np.uint64)
        u64b = (x2.astype(np.uint64) << np.uint64(32)) | x3.astype(np.uint64)
        ua = ((u64a >> np.uint64(11)).astype(np.float64) + 0.5) * rng._INV53
        ub = ((u64b >> np.uint64(11)).astype(np.float64) + 0.5) * rng._INV53
        z1 = ndtri(ua)
        z2 = ndtri(ub)
        y = rho[None, :] * z1 + s[None, :] * z2
        m1[done:done + k] = z1.max(axis=1)
        m2[done:done + k] = y.max(axis=1)
        done += k
    return m1, m2


def backend_name(force: str | None = None) -> str:
    mode = force or os.environ.get("TRIGAUSS_BACKEND", "").lower() or None
    if mode == "pure":
        return "pure"
    if mode == "compiled":
        if not HAVE_COMPILED:
            raise RuntimeError("compiled kernel requested but not available")
        return "compiled"
    return "compiled" if HAVE_COMPILED else "pure"


def maxima_batch(master_seed: int, rho, rep_start: int, n_reps: int,
                 domain: int = rng.DOMAIN_ARRAY_SIM, threads: int = 1,
                 force_backend: str | None = None):
    """Componentwise maxima (M1, M2) for replications
    rep_start .. rep_start + n_reps - 1."""
    rho = np.ascontiguousarray(rho, dtype=np.float64)
    if backend_name(force_backend) == "compiled":
        return _maxkernel.maxima_batch(
            int(master_seed) & 0xFFFFFFFFFFFFFFFF, rho, int(rep_start),
            int(n_reps), int(domain), int(threads),
        )
    return _pure_maxima_batch(
        int(master_seed) & 0xFFFFFFFFFFFFFFFF, rho, int(rep_start),
        int(n_reps), int(domain),
    )
