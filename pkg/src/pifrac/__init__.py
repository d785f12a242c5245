"""Hexadecimal pi digits, Pi Fraction tables and a GA that samples from them."""

from pifrac.bbp import BACKEND, AccuracyError, HexBlock, hex_digits_at
from pifrac.table import PiFractionTable, build_table, fixture_table, frac_from_hex, load_table, save_table

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "BACKEND",
    "HexBlock",
    "PiFractionTable",
    "build_table",
    "fixture_table",
    "frac_from_hex",
    "hex_digits_at",
    "load_table",
    "save_table",
]
