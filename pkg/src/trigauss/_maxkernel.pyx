# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Hot kernel: componentwise maxima of triangular-array rows.

Bitwise-compatible with the NumPy fallback in ``backend.py``: same
Philox4x32-10 counter layout, same (0,1) uniform mapping, same cephes
``ndtri`` normal transform, and no fused multiply-add (-ffp-contract=off).
"""

from cython.parallel cimport prange
from libc.math cimport sqrt
from scipy.special.cython_special cimport ndtri

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef unsigned int u32
ctypedef unsigned long long u64

cdef u32 PHILOX_M0 = <u32> 0xD2511F53
cdef u32 PHILOX_M1 = <u32> 0xCD9E8D57
cdef u32 PHILOX_W0 = <u32> 0x9E3779B9
cdef u32 PHILOX_W1 = <u32> 0xBB67AE85


cdef inline void _philox_block(u32 c0, u32 c1, u32 c2, u32 c3,
                               u32 k0, u32 k1, u32 *out) noexcept nogil:
    cdef u64 prod0, prod1
    cdef u32 hi0, lo0, hi1, lo1
    cdef int r
    for r in range(10):
        prod0 = (<u64> c0) * (<u64> PHILOX_M0)
        prod1 = (<u64> c2) * (<u64> PHILOX_M1)
        hi0 = <u32> (prod0 >> 32)
        lo0 = <u32> prod0
        hi1 = <u32> (prod1 >> 32)
        lo1 = <u32> prod1
        c0 = hi1 ^ c1 ^ k0
        c1 = lo1
        c2 = hi0 ^ c3 ^ k1
        c3 = lo0
        k0 = k0 + PHILOX_W0
        k1 = k1 + PHILOX_W1
    out[0] = c0
    out[1] = c1
    out[2] = c2
    out[3] = c3


cdef inline double _to_uniform(u32 hi, u32 lo) noexcept nogil:
    cdef u64 bits = ((<u64> hi) << 32) | (<u64> lo)
    return ((<double> (bits >> 11)) + 0.5) * (1.0 / 9007199254740992.0)


def maxima_batch(u64 master_seed, double[::1] rho, u64 rep_start,
                 Py_ssize_t n_reps, u32 domain, int num_threads=1):
    """Componentwise maxima for ``n_reps`` independent replications.

    Replication ``rep_start + r`` uses counter (i, rep_lo, rep_hi, domain)
    for row i, so results do not depend on batching or thread count.
    Returns (M1, M2) as float64 arrays of length n_reps.
    """
    cdef Py_ssize_t n = rho.shape[0]
    cdef u32 k0 = <u32> (master_seed & 0xFFFFFFFFu)
    cdef u32 k1 = <u32> (master_seed >> 32)
    out1 = np.empty(n_reps, dtype=np.float64)
    out2 = np.empty(n_reps, dtype=np.float64)
    cdef double[::1] m1 = out1
    cdef double[::1] m2 = out2
    cdef Py_ssize_t r, i
    cdef u64 rep
    cdef u32 c1, c2
    cdef u32 block[4]
    cdef double z1, z2, x, y, best1, best2, rr, s
    with nogil:
        for r in prange(n_reps, num_threads=num_threads, schedule="static"):
            rep = rep_start + <u64> r
            c1 = <u32> (rep & 0xFFFFFFFFu)
            c2 = <u32> (rep >> 32)
            best1 = -1e308
            best2 = -1e308
            for i in range(n):
                _philox_block(<u32> i, c1, c2, domain, k0, k1, block)
                z1 = ndtri(_to_uniform(block[0], block[1]))
                z2 = ndtri(_to_uniform(block[2], block[3]))
                rr = rho[i]
                s = sqrt(1.0 - rr * rr)
                x = z1
                y = rr * z1 + s * z2
                if x > best1:
                    best1 = x
                if y > best2:
                    best2 = y
            m1[r] = best1
            m2[r] = best2
    return out1, out2
