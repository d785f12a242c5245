from decimal import Decimal

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pifrac import table as tbl
from pifrac.bbp import HexBlock, hex_digits_at
from pifrac.table import (
    PiFractionTable,
    TableCountError,
    TableMissingError,
    TableParseError,
    build_table,
    chi_square_from_counts,
    chi_square_uniformity,
    distribution_stats,
    format_fraction,
    frac_from_hex,
    load_table,
    save_table,
    write_stats,
)


def test_frac_from_hex_exact():
    assert frac_from_hex("8") == Decimal("0.5")
    assert frac_from_hex("0001") == Decimal(1) / Decimal(65536)
    with pytest.raises(ValueError):
        frac_from_hex("")
    with pytest.raises(ValueError):
        frac_from_hex("XYZ")


def test_block_value_with_and_without_guard():
    bare = frac_from_hex("26C65E52CB459350050E4BB1")
    assert format_fraction(bare) == "0.151464362347971272412488292125"
    guarded = frac_from_hex(HexBlock(1_000_000, "26C65E52CB459350050E4BB1", "78F4C67A"))
    assert format_fraction(guarded) == "0.151464362347971272412488292131"


def test_first_fraction(table):
    assert table.count == 10_000
    assert table.text(1) == "0.141592653589793238462643383279"
    assert build_table(1).text(1) == table.text(1)


def test_build_matches_fixture_prefix(table):
    small = build_table(50)
    assert small.scaled == table.scaled[:50]


def test_build_independent_of_workers():
    assert build_table(60, start_position=500, workers=2) == build_table(60, start_position=500)


def test_sliding_identity(table):
    # adjacent fractions share all but one hex digit
    assert max(table.sliding_residuals()) * 16**23 < tbl.SCALE


def test_indexing(table):
    assert table[1] == pytest.approx(0.14159265358979323)
    assert table.fractions.shape == (10_000,)
    assert not table.fractions.flags.writeable
    with pytest.raises(IndexError):
        table[0]
    with pytest.raises(IndexError):
        table[10_001]
    assert table.exact(2) == Decimal(table.text(2))


def test_round_trip(tmp_path, table):
    path = save_table(table, tmp_path / "t.txt")
    lines = path.read_text().split("\n")
    assert lines[0] == "10000" and lines[-1] == ""
    assert load_table(path) == table


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(1, tbl.SCALE - 1), min_size=1, max_size=40))
def test_round_trip_property(tmp_path_factory, scaled):
    t = PiFractionTable(tuple(scaled))
    path = save_table(t, tmp_path_factory.mktemp("rt") / "t.txt")
    assert load_table(path).scaled == t.scaled


def test_load_errors(tmp_path):
    with pytest.raises(TableMissingError):
        load_table(tmp_path / "missing.txt")
    bad = tmp_path / "bad.txt"
    bad.write_text("3\n0.100000000000000000000000000000\n0.200000000000000000000000000000\n")
    with pytest.raises(TableCountError):
        load_table(bad)
    bad.write_text("two\n0.100000000000000000000000000000\n")
    with pytest.raises(TableParseError):
        load_table(bad)
    bad.write_text("1\n0.1\n")
    with pytest.raises(TableParseError):
        load_table(bad)


def test_chi_square_small():
    assert chi_square_from_counts([6, 4]) == pytest.approx(0.4)
    assert chi_square_from_counts([5, 5, 5]) == 0.0


def test_chi_square_needs_enough_points(table):
    with pytest.raises(ValueError):
        chi_square_uniformity(table, 1001)
    assert chi_square_uniformity(table, 100) < 148.23


def test_stats_synthetic():
    values = [(i + 0.5) / 20 for i in range(20)]
    s = distribution_stats(values, 10)
    assert list(s.pdf_counts) == [2] * 10
    assert s.cdf[-1] == 1.0
    assert s.mean == pytest.approx(0.5)
    assert np.allclose(s.normalized_pdf, 1.0)


def test_stats_top_edge_goes_to_last_bin():
    s = distribution_stats([0.0, 0.999999, 1.0], 4)
    assert list(s.pdf_counts) == [1, 0, 0, 2]


@given(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=200), st.integers(1, 50))
def test_stats_counts_add_up(values, bins):
    s = distribution_stats(values, bins)
    assert int(s.pdf_counts.sum()) == len(values)
    assert np.all(np.diff(s.cdf) >= 0)


def test_table_binning_is_exact(table):
    s = distribution_stats(table, 1000)
    assert s.total_points == 10_000
    assert abs(s.mean - 0.5) < 0.01


def test_write_stats(tmp_path, table):
    s = distribution_stats(table, 100)
    path = write_stats(s, tmp_path / "pdf.txt")
    lines = path.read_text().splitlines()
    assert lines[0] == "Pi Fraction Statistical Data"
    assert lines[1] == "Created (timestamp not recorded)"
    assert lines[2] == "#Fractions: 10000"
    assert len(lines) == 6 + 100
    assert lines[-1].startswith("1.00000 ") and lines[-1].endswith(" 1.00000")
    stamped = write_stats(s, tmp_path / "pdf2.txt", created="2020-01-01T00:00:00")
    assert stamped.read_text().splitlines()[1] == "Created 2020-01-01T00:00:00"


def test_digits_behind_fixture(table):
    # fraction i starts at hex digit i
    digits = hex_digits_at(1, 32 + 9).digits
    for i in (1, 5, 10):
        assert table.scaled[i - 1] == (int(digits[i - 1 : i + 31], 16) * tbl.SCALE) // 16**32


def test_far_end_check_value():
    # the original 215,830-line data file checks that its last fraction begins 0.203267
    block = hex_digits_at(215_830, 24, guard_digits=8)
    assert format_fraction(frac_from_hex(block)).startswith("0.203267")


def test_full_length_mean_from_independent_digits():
    # 215,862 hex digits straight from mpmath, pushed through the sliding-window definition
    import mpmath

    n = 215_830
    digits_needed = n + 32
    with mpmath.workprec(4 * digits_needed + 64):
        text = format(int(mpmath.floor(mpmath.pi * mpmath.mpf(2) ** (4 * digits_needed))), "X")[1:]
    scaled = [tbl._scaled_from_hex(text[i : i + 32]) for i in range(n)]
    assert scaled[:100] == list(tbl.fixture_table().scaled[:100])
    mean_all = Decimal(sum(scaled)) / n / tbl.SCALE
    mean_short = Decimal(sum(scaled[:-1])) / (n - 1) / tbl.SCALE
    assert abs(mean_all - Decimal("0.499283729688375")) < Decimal("1e-15")
    # the stated count of 215,829 misses the stated mean by more than 1e-6
    assert abs(mean_short - Decimal("0.499283729688375")) > Decimal("1e-6")

