# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the BBP head sum.

Accumulates in up to eight 64-bit limbs; every term is the exact floor of
``2**bits * (16**e mod m) / m`` so results match ``_bbp_py`` bit for bit.
"""

from libc.stdint cimport uint64_t

BACKEND = "cython"

cdef extern from *:
    """
    #include <stdint.h>
    static inline uint64_t pf_mulmod(uint64_t a, uint64_t b, uint64_t m) {
        if (m <= 0xFFFFFFFFULL) return (a * b) % m;
        return (uint64_t)(((unsigned __int128)a * b) % m);
    }
    /* one step of long division: (r * 2**64) / m, remainder written back */
    static inline uint64_t pf_divstep(uint64_t *r, uint64_t m) {
        if (m <= 0xFFFFFFFFULL) {
            uint64_t num = *r << 32;
            uint64_t hi = num / m;
            num = (num % m) << 32;
            *r = num % m;
            return (hi << 32) | (num / m);
        }
        unsigned __int128 num = ((unsigned __int128)(*r)) << 64;
        *r = (uint64_t)(num % m);
        return (uint64_t)(num / m);
    }
    """
    uint64_t pf_mulmod(uint64_t a, uint64_t b, uint64_t m) nogil
    uint64_t pf_divstep(uint64_t* r, uint64_t m) nogil

cdef enum:
    MAX_LIMBS = 8


cdef uint64_t _powmod(uint64_t base, uint64_t e, uint64_t m) noexcept nogil:
    cdef uint64_t result = 1 % m
    base = base % m
    while e:
        if e & 1:
            result = pf_mulmod(result, base, m)
        base = pf_mulmod(base, base, m)
        e >>= 1
    return result


cdef inline void _propagate(uint64_t* acc, int start, int nlimbs) noexcept nogil:
    cdef int i = start
    while i < nlimbs:
        acc[i] += 1
        if acc[i] != 0:
            return
        i += 1


def mod_pow(base, exponent, modulus):
    if modulus < 1:
        raise ValueError("modulus must be >= 1")
    if exponent < 0:
        raise ValueError("exponent must be >= 0")
    if base < 0 or base >= (1 << 64) or exponent >= (1 << 64) or modulus >= (1 << 63):
        return pow(base, exponent, modulus)
    return _powmod(base, exponent, modulus)


def head_sum(d, j, int bits):
    """Sum of floor(2**bits * (16**(d-k) mod m) / m), m = 8k+j, for k = 0..d, mod 2**bits."""
    if bits % 64 or bits // 64 > MAX_LIMBS or bits <= 0:
        raise ValueError("bits must be a positive multiple of 64 up to 512")
    if d < 0 or 8 * d + j >= (1 << 62):
        raise ValueError("offset out of range for the compiled kernel")
    cdef int nlimbs = bits // 64
    cdef uint64_t acc[MAX_LIMBS]
    cdef uint64_t dd = d
    cdef uint64_t jj = j
    cdef uint64_t k, m, r, q, s
    cdef int i
    for i in range(nlimbs):
        acc[i] = 0
    with nogil:
        for k in range(dd + 1):
            m = 8 * k + jj
            r = _powmod(16, dd - k, m)
            if r == 0:
                continue
            # long division of r * 2**bits by m, limbs most significant first
            for i in range(nlimbs - 1, -1, -1):
                q = pf_divstep(&r, m)
                # add q into limb i, carrying into higher limbs on overflow
                s = acc[i] + q
                if s < q:
                    _propagate(acc, i + 1, nlimbs)
                acc[i] = s
    out = 0
    for i in range(nlimbs - 1, -1, -1):
        out = (out << 64) | acc[i]
    return out
