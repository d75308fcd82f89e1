"""Counter-based random number streams (Philox4x32-10).

Every draw in the package is a pure function of
``(master_seed, domain, stream, index)``: the master seed keys the
generator, the domain tag separates independent uses (array simulation,
dataset generation, ad hoc sampling), the stream id is typically a Monte
Carlo replication index and the index runs along a row.  This makes all
results independent of scheduling and trivially reproducible in parallel.

The NumPy implementation here is the reference; the compiled kernel in
``_maxkernel`` produces bitwise-identical output (same counter layout,
same uniform mapping, same ``ndtri`` normal transform).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri

from .errors import DomainError

PHILOX_M0 = np.uint64(0xD2511F53)
PHILOX_M1 = np.uint64(0xCD9E8D57)
PHILOX_W0 = 0x9E3779B9
PHILOX_W1 = 0xBB67AE85

# Domain tags (counter word 3).
DOMAIN_ARRAY_SIM = 0
DOMAIN_DATASETS = 1
DOMAIN_ADHOC = 2

_MASK32 = np.uint64(0xFFFFFFFF)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


def philox4x32(c0, c1, c2, c3, k0, k1):
    """One Philox4x32-10 block per counter; returns four uint32 arrays."""
    c0 = np.asarray(c0, dtype=np.uint32)
    shape = c0.shape
    c1 = np.broadcast_to(np.asarray(c1, dtype=np.uint32), shape).copy()
    c2 = np.broadcast_to(np.asarray(c2, dtype=np.uint32), shape).copy()
    c3 = np.broadcast_to(np.asarray(c3, dtype=np.uint32), shape).copy()
    c0 = c0.copy()
    key0 = int(k0)
    key1 = int(k1)
    for _ in range(10):
        prod0 = c0.astype(np.uint64) * PHILOX_M0
        prod1 = c2.astype(np.uint64) * PHILOX_M1
        hi0 = (prod0 >> np.uint64(32)).astype(np.uint32)
        lo0 = (prod0 & _MASK32).astype(np.uint32)
        hi1 = (prod1 >> np.uint64(32)).astype(np.uint32)
        lo1 = (prod1 & _MASK32).astype(np.uint32)
        c0 = hi1 ^ c1 ^ np.uint32(key0)
        c1 = lo1
        c2 = hi0 ^ c3 ^ np.uint32(key1)
        c3 = lo0
        key0 = (key0 + PHILOX_W0) & 0xFFFFFFFF
        key1 = (key1 + PHILOX_W1) & 0xFFFFFFFF
    return c0, c1, c2, c3


def _split_seed(master_seed: int):
    seed = int(master_seed) & 0xFFFFFFFFFFFFFFFF
    return np.uint32(seed & 0xFFFFFFFF), np.uint32(seed >> 32)


def uniform_pairs(master_seed: int, domain: int, stream: int, index):
    """Two open-interval (0,1) uniforms per counter index."""
    index = np.asarray(index, dtype=np.uint32)
    stream = int(stream)
    k0, k1 = _split_seed(master_seed)
    x0, x1, x2, x3 = philox4x32(
        index,
        np.uint32(stream & 0xFFFFFFFF),
        np.uint32((stream >> 32) & 0xFFFFFFFF),
        np.uint32(domain),
        k0,
        k1,
    )
    u64a = (x0.astype(np.uint64) << np.uint64(32)) | x1.astype(np.uint64)
    u64b = (x2.astype(np.uint64) << np.uint64(32)) | x3.astype(np.uint64)
    ua = ((u64a >> np.uint64(11)).astype(np.float64) + 0.5) * _INV53
    ub = ((u64b >> np.uint64(11)).astype(np.float64) + 0.5) * _INV53
    return ua, ub


def normal_pairs(master_seed: int, domain: int, stream: int, index):
    """Two independent standard normals per counter index (inverse CDF)."""
    ua, ub = uniform_pairs(master_seed, domain, stream, index)
    return ndtri(ua), ndtri(ub)


def bivariate_rows(master_seed: int, domain: int, stream: int, rho):
    """One correlated Gaussian pair per row, ``rho`` giving per-row
    correlations.  Construction: X = Z1, Y = rho*Z1 + sqrt(1-rho^2)*Z2."""
    rho = np.asarray(rho, dtype=np.float64)
    z1, z2 = normal_pairs(master_seed, domain, stream, np.arange(rho.size))
    s = np.sqrt(1.0 - rho * rho)
    return z1, rho * z1 + s * z2


@dataclass
class PairStream:
    """Caller-owned stream handing out one bivariate draw at a time.

    Distinct ``stream`` ids (or seeds) give independent streams; the
    position advances with every draw, so a stream is deterministic and
    replayable from its initial state.
    """

    master_seed: int
    stream: int = 0
    position: int = field(default=0)

    def draw_pair(self, rho: float):
        if not np.isfinite(rho) or abs(rho) >= 1.0:
            raise DomainError(f"correlation must satisfy |rho| < 1, got {rho}")
        z1, z2 = normal_pairs(
            self.master_seed, DOMAIN_ADHOC, self.stream, np.array([self.position])
        )
        self.position += 1
        s = np.sqrt(1.0 - rho * rho)
        return float(z1[0]), float(rho * z1[0] + s * z2[0])
