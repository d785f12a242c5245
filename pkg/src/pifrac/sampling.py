"""Deterministic draws from a fraction table, comparison sequences and correlation diagnostics.

``SamplerState`` is the cursor-style generator (draw, then step the index
by ``increment``, wrapping to 1 past the end of the table).  The
``indexed_*`` functions are the stateless form used by the GA, where the
caller computes the table index itself.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from pifrac.table import PiFractionTable

__all__ = [
    "SOURCES",
    "SamplerState",
    "ScatterSpec",
    "SplitMix64",
    "UndefinedCorrelationError",
    "branch_alignment",
    "clock_start_index",
    "halton_point",
    "indexed_integer",
    "indexed_uniform",
    "integer_from_unit",
    "next_integer",
    "next_uniform",
    "nth_prime",
    "pearson",
    "radical_inverse",
    "sample_matrix",
    "scatter_export",
    "write_plot_script",
]

SOURCES = ("pifrac", "halton", "vdc", "prng")


class UndefinedCorrelationError(ValueError):
    """Pearson coefficient requested for a constant vector."""


@dataclass
class SamplerState:
    table: PiFractionTable
    index: int = 1
    increment: int = 1

    def __post_init__(self):
        if self.increment < 1:
            raise ValueError("increment must be >= 1")
        if not 1 <= self.index <= self.table.count:
            raise ValueError(f"index must lie in 1..{self.table.count}")

    def advance(self) -> float:
        u = self.table[self.index]
        self.index += self.increment
        if self.index > self.table.count:
            self.index = 1
        return u


def clock_start_index(table: PiFractionTable) -> int:
    """Wall-clock derived start index (opt-in only; breaks reproducibility)."""
    return int(time.time() * 1000) % table.count + 1


def next_uniform(state: SamplerState, a: float, b: float) -> float:
    if a > b:
        a, b = b, a
    return a + (b - a) * state.advance()


def _wrap(table: PiFractionTable, k):
    return (k - 1) % table.count + 1


def indexed_uniform(table: PiFractionTable, k: int, a: float, b: float) -> float:
    """``a + (b - a) * fraction[k]`` with ``k`` wrapped into the table."""
    if k < 1:
        raise ValueError("index k must be >= 1")
    if a > b:
        a, b = b, a
    return a + (b - a) * table[_wrap(table, k)]


def integer_from_unit(u: float, n: int, m: int) -> int:
    """Map ``u`` in [0, 1) to an integer uniform on ``[n, m]``."""
    if n > m:
        n, m = m, n
    return min(n + math.floor((m - n + 1) * u), m)


def next_integer(state: SamplerState, n: int, m: int) -> int:
    return integer_from_unit(state.advance(), n, m)


def indexed_integer(table: PiFractionTable, k: int, n: int, m: int) -> int:
    if k < 1:
        raise ValueError("index k must be >= 1")
    return integer_from_unit(table[_wrap(table, k)], n, m)


class SplitMix64:
    """SplitMix64 (Steele, Lea & Flood): 64-bit state, golden-gamma increment.

    Doubles are the top 53 bits of each output scaled by 2**-53.
    """

    GAMMA = 0x9E3779B97F4A7C15
    MASK = (1 << 64) - 1

    def __init__(self, seed: int = 0):
        self.state = seed & self.MASK

    def next_u64(self) -> int:
        self.state = (self.state + self.GAMMA) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def split(self) -> "SplitMix64":
        return SplitMix64(self.next_u64())


def radical_inverse(index: int, base: int) -> float:
    if index < 1:
        raise ValueError("index must be >= 1")
    if base < 2:
        raise ValueError("base must be >= 2")
    num, den = 0, 1
    while index:
        index, digit = divmod(index, base)
        num = num * base + digit
        den *= base
    return num / den


def nth_prime(n: int) -> int:
    """The ``n``-th prime, 1-based (``nth_prime(1) == 2``)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    limit = max(15, int(n * (math.log(n) + math.log(math.log(n + 2)) + 2)))
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    primes = [i for i, flag in enumerate(sieve) if flag]
    return primes[n - 1]


def halton_point(index: int, dims: int) -> list[float]:
    if dims < 1:
        raise ValueError("dims must be >= 1")
    return [radical_inverse(index, nth_prime(i + 1)) for i in range(dims)]


@dataclass(frozen=True)
class ScatterSpec:
    dims: int = 30
    points: int = 1000
    dim_a: int = 27
    dim_b: int = 28
    source: str = "pifrac"

    def __post_init__(self):
        if self.points < 1 or self.dims < 1:
            raise ValueError("points and dims must be >= 1")
        if not (1 <= self.dim_a <= self.dims and 1 <= self.dim_b <= self.dims):
            raise ValueError("plotted dimensions must lie in 1..dims")
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}; choose from {SOURCES}")


def sample_matrix(spec: ScatterSpec, state: SamplerState | None = None, *, seed: int = 0) -> np.ndarray:
    """``points x dims`` matrix, coordinates of each point drawn consecutively.

    ``state`` drives the pifrac source; ``seed`` the prng source.  The vdc
    source walks the base-2 van der Corput sequence in the same row-major
    order; halton uses point index ``p`` in every coordinate.
    """
    n, d = spec.points, spec.dims
    out = np.empty((n, d), dtype=np.float64)
    if spec.source == "pifrac":
        if state is None:
            raise ValueError("the pifrac source needs a SamplerState")
        if n * d * state.increment > state.table.count:
            warnings.warn(
                f"{n * d} draws at increment {state.increment} exceed the {state.table.count}-fraction table; "
                "the cursor will wrap and reuse fractions",
                stacklevel=2,
            )
        for p in range(n):
            for i in range(d):
                out[p, i] = next_uniform(state, 0.0, 1.0)
    elif spec.source == "halton":
        bases = [nth_prime(i + 1) for i in range(d)]
        for p in range(n):
            out[p] = [radical_inverse(p + 1, b) for b in bases]
    elif spec.source == "vdc":
        for p in range(n):
            out[p] = [radical_inverse(p * d + i + 1, 2) for i in range(d)]
    else:
        rng = SplitMix64(seed)
        for p in range(n):
            out[p] = [rng.random() for _ in range(d)]
    return out


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1 or x.size < 2:
        raise ValueError("pearson needs two equal-length vectors of length >= 2")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = math.fsum(dx * dx)
    syy = math.fsum(dy * dy)
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelationError("zero variance")
    r = math.fsum(dx * dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def branch_alignment(xs: Sequence[float], ys: Sequence[float], branch_factor: int = 16, tolerance: float = 1e-6) -> float:
    """Fraction of pairs with ``y`` within ``tolerance`` of ``frac(branch_factor * x)`` (mod 1)."""
    if branch_factor < 2:
        raise ValueError("branch_factor must be >= 2")
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError("xs and ys differ in length")
    if x.size == 0:
        return 0.0
    diff = np.abs(np.mod(branch_factor * x, 1.0) - y)
    diff = np.minimum(diff, 1.0 - diff)
    return float(np.count_nonzero(diff < tolerance)) / x.size


def _format_row(a: float, b: float) -> str:
    return f"{a:.5f} {b:.5f}"


def scatter_export(
    spec: ScatterSpec,
    state: SamplerState | None,
    destination: str | Path,
    *,
    seed: int = 0,
    plot_script: bool = False,
    title: str | None = None,
) -> tuple[Path, np.ndarray]:
    """Write the (dim_a, dim_b) columns of a sample matrix; returns the path and the matrix."""
    matrix = sample_matrix(spec, state, seed=seed)
    path = Path(destination)
    cols = matrix[:, [spec.dim_a - 1, spec.dim_b - 1]]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.writelines(_format_row(a, b) + "\n" for a, b in cols)
    if plot_script:
        write_plot_script(spec, path, path.with_suffix(".plt"), title=title)
    return path, matrix


def write_plot_script(spec: ScatterSpec, data_file: Path, destination: Path, *, title: str | None = None) -> Path:
    """gnuplot command file plotting ``data_file`` as points."""
    label = {"pifrac": "PI FRACTION", "halton": "HALTON", "vdc": "VAN DER CORPUT", "prng": "PSEUDORANDOM"}[spec.source]
    if title is None:
        title = (
            f"{label} POINTS IN {spec.dims} DIMENSIONS, {spec.points} POINTS.\\n"
            f"Plot of dimensions {spec.dim_a} and {spec.dim_b}."
        )
    lines = [
        "set grid",
        f'set title "{title}"',
        f'set xlabel "x{spec.dim_a}"',
        f'set ylabel "x{spec.dim_b}"',
        "set xrange [0:1]",
        "set yrange [0:1]",
        f'plot "{Path(data_file).name}" using 1:2 with points pt 7 ps 0.5 notitle',
    ]
    destination = Path(destination)
    destination.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return destination


