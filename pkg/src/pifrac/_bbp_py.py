"""Pure-Python kernels for the BBP head sum.

Bit-for-bit twin of the compiled ``_bbp_core`` extension; used when the
extension is not built or when ``PIFRAC_PURE_PYTHON=1`` is set.
"""

BACKEND = "python"


def mod_pow(base, exponent, modulus):
    if modulus < 1:
        raise ValueError("modulus must be >= 1")
    if exponent < 0:
        raise ValueError("exponent must be >= 0")
    return pow(base, exponent, modulus)


def head_sum(d, j, bits):
    """Sum of floor(2**bits * (16**(d-k) mod m) / m), m = 8k+j, for k = 0..d, mod 2**bits."""
    acc = 0
    m = j
    for e in range(d, -1, -1):
        acc += (pow(16, e, m) << bits) // m
        m += 8
    return acc & ((1 << bits) - 1)
