"""Hexadecimal digits of pi at arbitrary positions (BBP digit extraction).

All arithmetic is exact integer fixed point.  The head of each shifted
series, ``sum_{k<=d} 16**(d-k) / (8k+j)``, is reduced with modular
exponentiation and runs in the compiled kernel when it is available; the
short convergent tail is summed in Python.

Positions are 1-based: digit 1 is the first hex digit after the radix
point, so ``hex_digits_at(1, 8) == "243F6A88"``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

try:
    if os.environ.get("PIFRAC_PURE_PYTHON"):
        raise ImportError("pure-Python kernels requested")
    from pifrac import _bbp_core as _kernel
except ImportError:
    from pifrac import _bbp_py as _kernel

__all__ = [
    "AccuracyError",
    "BACKEND",
    "DEFAULT_PRECISION_BITS",
    "DIGITS_PER_EVALUATION",
    "FixedPointFraction",
    "GUARD_BITS",
    "HexBlock",
    "bbp_fractional_tail",
    "hex_digits_at",
    "mod_pow",
    "pi_fraction_bits",
]

BACKEND: str = _kernel.BACKEND

DEFAULT_PRECISION_BITS = 192
GUARD_BITS = 32
DIGITS_PER_EVALUATION = 24
TAIL_EXTRA_BITS = 8

_HEX = "0123456789ABCDEF"
_SERIES = ((1, 4), (4, -2), (5, -1), (6, -1))


class AccuracyError(ArithmeticError):
    """Requested digits cannot be backed by the guard-bit guarantee."""


@dataclass(frozen=True)
class FixedPointFraction:
    """A value ``numerator / 2**precision_bits`` in [0, 1)."""

    numerator: int
    precision_bits: int

    def __post_init__(self):
        if self.precision_bits < 1:
            raise ValueError("precision_bits must be positive")
        if not 0 <= self.numerator < (1 << self.precision_bits):
            raise ValueError("numerator outside [0, 2**precision_bits)")

    def __float__(self):
        return self.numerator / (1 << self.precision_bits)

    def hex_digits(self, count: int) -> str:
        """Leading ``count`` hex digits of the fraction (truncated)."""
        if 4 * count > self.precision_bits:
            raise AccuracyError(f"only {self.precision_bits // 4} hex digits are held")
        top = self.numerator >> (self.precision_bits - 4 * count)
        return format(top, "X").zfill(count) if count else ""


@dataclass(frozen=True)
class HexBlock:
    """Run of hex digits of pi starting at ``start_position``.

    ``guard`` holds continuation digits extracted alongside ``digits``; they
    are not part of the block but let a consumer round the block's value
    as if the expansion continued.
    """

    start_position: int
    digits: str
    guard: str = ""

    def __post_init__(self):
        if self.start_position < 1:
            raise ValueError("start_position must be >= 1")
        for ch in self.digits + self.guard:
            if ch not in _HEX:
                raise ValueError(f"invalid hex digit {ch!r}")

    def __len__(self):
        return len(self.digits)

    def __str__(self):
        return self.digits


def mod_pow(base: int, exponent: int, modulus: int) -> int:
    """``base**exponent % modulus`` for non-negative arguments.

    Raises ``ValueError`` when ``modulus`` is zero (or negative).
    """
    if base < 0:
        raise ValueError("base must be >= 0")
    return _kernel.mod_pow(base, exponent, modulus)


def _head_sum(d: int, j: int, bits: int) -> int:
    if bits % 64 == 0 and bits <= 512 and 8 * d + j < (1 << 62):
        return _kernel.head_sum(d, j, bits)
    from pifrac import _bbp_py

    return _bbp_py.head_sum(d, j, bits)


def _tail_sum(d: int, j: int, bits: int) -> int:
    # terms 16**(d-k)/(8k+j), k > d, summed at bits + TAIL_EXTRA_BITS then truncated
    work = bits + TAIL_EXTRA_BITS
    acc = 0
    n = 1
    while 4 * n <= work:
        acc += (1 << (work - 4 * n)) // (8 * (d + n) + j)
        n += 1
    return acc >> TAIL_EXTRA_BITS


def bbp_fractional_tail(d: int, j: int, precision_bits: int = DEFAULT_PRECISION_BITS) -> FixedPointFraction:
    """Fractional part of ``sum_k 16**(d-k) / (8k+j)`` to ``precision_bits`` bits.

    The result is truncated toward zero; its error is below ``d + 3`` units
    in the last place.
    """
    if d < 0:
        raise ValueError("offset d must be >= 0")
    if j not in (1, 4, 5, 6):
        raise ValueError("j must be one of 1, 4, 5, 6")
    mask = (1 << precision_bits) - 1
    total = (_head_sum(d, j, precision_bits) + _tail_sum(d, j, precision_bits)) & mask
    return FixedPointFraction(total, precision_bits)


def pi_fraction_bits(d: int, precision_bits: int = DEFAULT_PRECISION_BITS) -> tuple[int, int]:
    """``frac(16**d * pi)`` as a fixed-point numerator, plus its error bound in ulps."""
    mask = (1 << precision_bits) - 1
    acc = 0
    for j, weight in _SERIES:
        acc += weight * bbp_fractional_tail(d, j, precision_bits).numerator
    # each series is low by < d+3 ulps; weights 4, -2, -1, -1
    return acc & mask, 8 * (d + 3)


def _digits_once(d: int, count: int, bits: int) -> str | None:
    value, err = pi_fraction_bits(d, bits)
    shift = bits - 4 * count
    lo = ((value - err) & ((1 << bits) - 1)) >> shift
    hi = ((value + err) & ((1 << bits) - 1)) >> shift
    if lo != hi:
        return None
    return format(lo, "X").zfill(count)


def _anchored_digits(d: int, count: int, precision_bits: int) -> str:
    bits = precision_bits
    while True:
        digits = _digits_once(d, count, bits)
        if digits is not None:
            return digits
        # rounding window straddles a digit boundary: widen and retry
        bits += 64


def hex_digits_at(
    position: int,
    count: int,
    *,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    reanchor: bool = True,
    guard_digits: int = 0,
) -> HexBlock:
    """Exactly ``count`` hex digits of pi starting at 1-based ``position``.

    A fresh series evaluation is made every ``DIGITS_PER_EVALUATION``
    digits so that each emitted digit is backed by at least ``GUARD_BITS``
    guard bits.  With ``reanchor=False`` a single evaluation must cover
    the whole request, otherwise ``AccuracyError`` is raised.
    """
    if position < 1:
        raise ValueError("position must be >= 1")
    if count < 0 or guard_digits < 0:
        raise ValueError("count must be >= 0")
    if precision_bits < 4 * DIGITS_PER_EVALUATION + GUARD_BITS:
        raise ValueError(f"precision_bits must be >= {4 * DIGITS_PER_EVALUATION + GUARD_BITS}")
    total = count + guard_digits
    if not reanchor:
        if 4 * total + GUARD_BITS > precision_bits:
            raise AccuracyError(
                f"{total} digits need {4 * total + GUARD_BITS} bits without re-anchoring; "
                f"only {precision_bits} available"
            )
        text = _anchored_digits(position - 1, total, precision_bits) if total else ""
    else:
        parts = []
        for off in range(0, total, DIGITS_PER_EVALUATION):
            n = min(DIGITS_PER_EVALUATION, total - off)
            parts.append(_anchored_digits(position - 1 + off, n, precision_bits))
        text = "".join(parts)
    return HexBlock(position, text[:count], text[count:])
