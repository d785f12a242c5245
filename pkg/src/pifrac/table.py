"""Pi Fraction tables: construction, persistence and distribution statistics.

Fraction ``i`` of a table is read from the hex expansion of pi beginning at
digit ``start_position + i - 1``: the ``window_digits`` block plus
``guard_digits`` continuation digits, truncated to ``DECIMALS`` decimal
places.  Adjacent fractions therefore overlap in all but one hex digit.

Values are held exactly as integers scaled by ``10**DECIMALS``; the float
view used for sampling is derived from them.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from pifrac.bbp import DIGITS_PER_EVALUATION, HexBlock, hex_digits_at

__all__ = [
    "DECIMALS",
    "DEFAULT_GUARD_DIGITS",
    "DistributionStats",
    "PiFractionTable",
    "TableCountError",
    "TableError",
    "TableMissingError",
    "TableParseError",
    "build_table",
    "chi_square_from_counts",
    "chi_square_uniformity",
    "distribution_stats",
    "fixture_table",
    "format_fraction",
    "frac_from_hex",
    "load_table",
    "save_table",
    "write_stats",
]

DECIMALS = 30
SCALE = 10**DECIMALS
DEFAULT_WINDOW = 24
DEFAULT_GUARD_DIGITS = 8
FIXTURE_NAME = "pifrac_10000.txt"


class TableError(Exception):
    """Base class for fraction-table file problems."""


class TableMissingError(TableError):
    pass


class TableCountError(TableError):
    """Header count disagrees with the number of body lines."""


class TableParseError(TableError):
    pass


def _hex_text(block: HexBlock | str) -> str:
    if isinstance(block, HexBlock):
        return block.digits + block.guard
    text = str(block).strip().upper()
    for ch in text:
        if ch not in "0123456789ABCDEF":
            raise ValueError(f"invalid hex digit {ch!r}")
    return text


def frac_from_hex(block: HexBlock | str) -> Decimal:
    """Exact value of ``0.<hex digits>`` as a ``Decimal``.

    A ``HexBlock`` contributes its guard digits too, so the value is the
    block read as part of the continuing expansion.

    >>> frac_from_hex("8")
    Decimal('0.5')
    """
    text = _hex_text(block)
    if not text:
        raise ValueError("empty hex block")
    with localcontext() as ctx:
        ctx.prec = 4 * len(text) + 2
        return Decimal(int(text, 16)) / Decimal(16 ** len(text))


def _scaled_from_hex(text: str) -> int:
    return (int(text, 16) * SCALE) // 16 ** len(text)


def format_fraction(value: Decimal | int) -> str:
    """``0.`` followed by exactly 30 decimals (truncated)."""
    if isinstance(value, Decimal):
        with localcontext() as ctx:
            ctx.prec = max(ctx.prec, len(value.as_tuple().digits) + DECIMALS + 2)
            value = int((value * SCALE).to_integral_value(rounding="ROUND_FLOOR"))
    if not 0 <= value < SCALE:
        raise ValueError("fraction outside [0, 1)")
    return "0." + str(value).zfill(DECIMALS)


@dataclass(frozen=True, eq=False)
class PiFractionTable:
    """Immutable ordered fractions in (0, 1), indexed from 1 like the original code.

    ``table[i]`` is the float value of fraction ``i``; ``table.fractions``
    is the same data as a 0-based read-only numpy array.
    """

    scaled: tuple[int, ...]
    window_digits: int = DEFAULT_WINDOW
    start_position: int = 1
    guard_digits: int = DEFAULT_GUARD_DIGITS
    source: str = field(default="bbp", compare=False)

    def __post_init__(self):
        if not self.scaled:
            raise ValueError("empty table")
        if self.window_digits < 1 or self.start_position < 1:
            raise ValueError("window_digits and start_position must be >= 1")

    @property
    def count(self) -> int:
        return len(self.scaled)

    def __len__(self):
        return len(self.scaled)

    def __eq__(self, other):
        if not isinstance(other, PiFractionTable):
            return NotImplemented
        return self.scaled == other.scaled

    def __hash__(self):
        return hash(self.scaled)

    @cached_property
    def fractions(self) -> np.ndarray:
        arr = np.array([n / SCALE for n in self.scaled], dtype=np.float64)
        arr.setflags(write=False)
        return arr

    def __getitem__(self, i: int) -> float:
        if not 1 <= i <= self.count:
            raise IndexError(f"fraction index {i} outside 1..{self.count}")
        return float(self.fractions[i - 1])

    def exact(self, i: int) -> Decimal:
        return Decimal(self.text(i))

    def text(self, i: int) -> str:
        return format_fraction(self.scaled[i - 1])

    def sliding_residuals(self) -> list[int]:
        """``|frac(16*f_i) - f_{i+1}|`` for each adjacent pair, in units of ``10**-30``."""
        s = self.scaled
        return [abs((16 * s[i]) % SCALE - s[i + 1]) for i in range(len(s) - 1)]


def _fetch(args: tuple[int, int]) -> str:
    pos, n = args
    return hex_digits_at(pos, n).digits


def _hex_run(start: int, length: int, workers: int | None) -> str:
    jobs = [(start + off, min(DIGITS_PER_EVALUATION, length - off)) for off in range(0, length, DIGITS_PER_EVALUATION)]
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return "".join(pool.map(_fetch, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    return "".join(_fetch(j) for j in jobs)


def build_table(
    count: int,
    window_digits: int = DEFAULT_WINDOW,
    start_position: int = 1,
    *,
    guard_digits: int = DEFAULT_GUARD_DIGITS,
    workers: int | None = None,
) -> PiFractionTable:
    """Build ``count`` sliding-window fractions starting at hex digit ``start_position``.

    ``count + window_digits + guard_digits - 1`` hex digits are extracted in
    total.  ``workers > 1`` spreads the extraction over processes; the
    result does not depend on it.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if window_digits < 1 or guard_digits < 0:
        raise ValueError("window_digits must be >= 1 and guard_digits >= 0")
    width = window_digits + guard_digits
    digits = _hex_run(start_position, count + width - 1, workers)
    scaled = tuple(_scaled_from_hex(digits[i : i + width]) for i in range(count))
    return PiFractionTable(scaled, window_digits, start_position, guard_digits)


def save_table(table: PiFractionTable, destination: str | Path) -> Path:
    path = Path(destination)
    lines = [str(table.count)]
    lines.extend(format_fraction(n) for n in table.scaled)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def _parse_line(line: str, lineno: int) -> int:
    text = line.strip()
    digits = text[2:]
    if not (text.startswith("0.") and len(digits) == DECIMALS and digits.isdigit() and digits.isascii()):
        raise TableParseError(f"line {lineno}: expected '0.' and {DECIMALS} digits, got {text!r}")
    return int(digits)


def load_table(
    source: str | Path,
    *,
    window_digits: int = DEFAULT_WINDOW,
    start_position: int = 1,
    guard_digits: int = DEFAULT_GUARD_DIGITS,
) -> PiFractionTable:
    """Read a fraction table file written by :func:`save_table`."""
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise TableMissingError(f"no fraction table at {path}") from exc
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines:
        raise TableParseError(f"{path}: empty file")
    try:
        declared = int(lines[0].strip())
    except ValueError as exc:
        raise TableParseError(f"{path}: line 1 is not a count: {lines[0]!r}") from exc
    body = lines[1:]
    if declared != len(body):
        raise TableCountError(f"{path}: header says {declared} fractions, body has {len(body)}")
    if declared < 1:
        raise TableCountError(f"{path}: table holds no fractions")
    scaled = tuple(_parse_line(ln, i + 2) for i, ln in enumerate(body))
    return PiFractionTable(scaled, window_digits, start_position, guard_digits, source=str(path))


def fixture_table() -> PiFractionTable:
    """The bundled 10,000-fraction table (start position 1, window 24)."""
    ref = resources.files("pifrac") / "data" / FIXTURE_NAME
    with resources.as_file(ref) as path:
        return load_table(path)


@dataclass(frozen=True)
class DistributionStats:
    bin_count: int
    pdf_counts: np.ndarray
    cdf: np.ndarray
    mean: float
    total_points: int

    @property
    def normalized_pdf(self) -> np.ndarray:
        return self.pdf_counts / (self.total_points / self.bin_count)


def _bin_counts(values: PiFractionTable | Iterable[float], bin_count: int) -> tuple[np.ndarray, float, int]:
    counts = np.zeros(bin_count, dtype=np.int64)
    if isinstance(values, PiFractionTable):
        # exact integer binning; last bin closed above
        idx = np.array([min(n * bin_count // SCALE, bin_count - 1) for n in values.scaled], dtype=np.int64)
        np.add.at(counts, idx, 1)
        mean = float(Decimal(sum(values.scaled)) / Decimal(values.count) / SCALE)
        return counts, mean, values.count
    x = np.asarray(list(values), dtype=np.float64)
    if x.size == 0:
        raise ValueError("no values to bin")
    idx = np.clip(np.floor(x * bin_count).astype(np.int64), 0, bin_count - 1)
    np.add.at(counts, idx, 1)
    return counts, math.fsum(x) / x.size, int(x.size)


def distribution_stats(values: PiFractionTable | Iterable[float], bin_count: int = 1000) -> DistributionStats:
    """Equal-width histogram of the fractions on [0, 1] with running CDF and mean."""
    if bin_count < 1:
        raise ValueError("bin_count must be >= 1")
    counts, mean, total = _bin_counts(values, bin_count)
    if int(counts.sum()) != total:
        raise AssertionError(f"total PDF points {counts.sum()} != {total}")
    cdf = np.cumsum(counts) / total
    return DistributionStats(bin_count, counts, cdf, mean, total)


def chi_square_from_counts(counts: Sequence[int]) -> float:
    """Pearson chi-square of observed bin counts against a flat expectation."""
    obs = np.asarray(counts, dtype=np.float64)
    expected = obs.sum() / obs.size
    return float(np.sum((obs - expected) ** 2) / expected)


def chi_square_uniformity(table: PiFractionTable | Sequence[float], bin_count: int) -> float:
    n = table.count if isinstance(table, PiFractionTable) else len(table)
    if n < 10 * bin_count:
        raise ValueError(f"need at least {10 * bin_count} fractions for {bin_count} bins, have {n}")
    counts, _, _ = _bin_counts(table, bin_count)
    return chi_square_from_counts(counts)


def write_stats(stats: DistributionStats, destination: str | Path, *, created: str | None = None) -> Path:
    """Write the PDF/CDF report; ``created`` is a caller-supplied timestamp line."""
    path = Path(destination)
    rows = [
        "Pi Fraction Statistical Data",
        f"Created {created}" if created else "Created (timestamp not recorded)",
        f"#Fractions: {stats.total_points}",
        f"Mean value: {stats.mean:.15f}",
        f"Bins: {stats.bin_count}",
        "Norm Bin#  PDF  CDF",
    ]
    norm = stats.normalized_pdf
    for b in range(stats.bin_count):
        rows.append(f"{(b + 1) / stats.bin_count:.5f} {norm[b]:.5f} {stats.cdf[b]:.5f}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(rows) + "\n")
    return path
