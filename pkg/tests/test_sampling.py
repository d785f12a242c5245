import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pifrac.sampling import (
    SamplerState,
    ScatterSpec,
    SplitMix64,
    UndefinedCorrelationError,
    branch_alignment,
    halton_point,
    indexed_integer,
    indexed_uniform,
    integer_from_unit,
    next_uniform,
    nth_prime,
    pearson,
    radical_inverse,
    sample_matrix,
    scatter_export,
)
from pifrac.table import PiFractionTable


@pytest.mark.parametrize("i,b,want", [(1, 2, 0.5), (3, 2, 0.75), (4, 2, 0.125), (1, 3, 1 / 3), (5, 3, 7 / 9)])
def test_radical_inverse(i, b, want):
    assert radical_inverse(i, b) == pytest.approx(want)


def test_radical_inverse_checks():
    with pytest.raises(ValueError):
        radical_inverse(0, 2)
    with pytest.raises(ValueError):
        radical_inverse(1, 1)


def test_primes_and_halton():
    assert [nth_prime(n) for n in range(1, 8)] == [2, 3, 5, 7, 11, 13, 17]
    assert nth_prime(28) == 107
    assert halton_point(1, 2) == pytest.approx([0.5, 1 / 3])
    assert halton_point(2, 1) == [0.25]
    assert halton_point(1, 28)[27] == pytest.approx(1 / 107)


def test_halton_pearson_oracle():
    # reference value from scipy.stats.qmc.Halton (unscrambled, points 1..1000)
    m = sample_matrix(ScatterSpec(30, 1000, 27, 28, "halton"))
    assert pearson(m[:, 26], m[:, 27]) == pytest.approx(0.1726613962051898, abs=1e-6)


def test_cursor_draws(table):
    st_ = SamplerState(table, 1, 3)
    assert next_uniform(st_, 0.0, 1.0) == table[1]
    assert st_.index == 4
    assert next_uniform(st_, 2.0, -2.0) == pytest.approx(-2.0 + 4.0 * table[4])


def test_cursor_wraps(table):
    st_ = SamplerState(table, 1, 1)
    for _ in range(table.count):
        st_.advance()
    assert st_.index == 1
    st_ = SamplerState(table, table.count, 5)
    st_.advance()
    assert st_.index == 1


def test_indexed_draws(table):
    assert indexed_uniform(table, 1, 0.0, 1.0) == table[1]
    assert indexed_uniform(table, table.count + 2, 0.0, 1.0) == table[2]
    assert indexed_integer(table, 1, 1, 10) == 2  # 0.1415... * 10
    with pytest.raises(ValueError):
        indexed_uniform(table, 0, 0.0, 1.0)


@given(st.floats(0.0, 1.0, exclude_max=True), st.integers(-50, 50), st.integers(0, 100))
def test_integer_from_unit_in_range(u, n, width):
    k = integer_from_unit(u, n, n + width)
    assert n <= k <= n + width


def test_integer_from_unit_is_uniform():
    counts = np.bincount([integer_from_unit((i + 0.5) / 600, 1, 6) for i in range(600)])
    assert list(counts[1:]) == [100] * 6


def test_splitmix64_reference():
    # reference outputs for seed 1234567
    g = SplitMix64(1234567)
    assert [g.next_u64() for _ in range(3)] == [6457827717110365317, 3203168211198807973, 9817491932198370423]
    assert 0.0 <= SplitMix64(0).random() < 1.0


def test_pearson():
    assert pearson([1, 2, 3], [1, 2, 3]) == 1.0
    assert pearson([1, 2, 3], [-1, -2, -3]) == -1.0
    assert pearson([1, 2, 3], [1, 2, 4]) == pytest.approx(0.9819805060619657, abs=1e-12)
    with pytest.raises(UndefinedCorrelationError):
        pearson([1, 1, 1], [1, 2, 3])
    with pytest.raises(ValueError):
        pearson([1], [1])


def test_alignment_constructed():
    xs = np.linspace(0.0, 0.99, 200)
    assert branch_alignment(xs, np.mod(16 * xs, 1.0), 16) == 1.0
    # wraps across 0/1
    assert branch_alignment([1 / 16], [0.9999999], 16, 1e-6) == 1.0


def test_alignment_of_independent_points():
    # the tolerance band has total measure 2*tol whatever the branch factor
    g = SplitMix64(7)
    n, tol = 40_000, 0.01
    xs = [g.random() for _ in range(n)]
    ys = [g.random() for _ in range(n)]
    sd = math.sqrt(2 * tol * (1 - 2 * tol) / n)
    for b in (16, 256):
        assert abs(branch_alignment(xs, ys, b, tol) - 2 * tol) < 5 * sd


def test_increment_one_adjacency(table):
    m = sample_matrix(ScatterSpec(30, 50), SamplerState(table))
    assert np.all(np.abs(np.mod(16 * m[:, :-1], 1.0) - m[:, 1:]) < 1e-6)


def test_sources_range_and_determinism():
    for src in ("halton", "vdc", "prng"):
        a = sample_matrix(ScatterSpec(30, 200, source=src), seed=3)
        assert a.shape == (200, 30)
        assert np.all((a >= 0) & (a < 1))
        assert np.array_equal(a, sample_matrix(ScatterSpec(30, 200, source=src), seed=3))


def test_wrap_warning(table):
    with pytest.warns(UserWarning, match="wrap"):
        sample_matrix(ScatterSpec(30, 400), SamplerState(table))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        sample_matrix(ScatterSpec(30, 100), SamplerState(table))


def test_scatter_spec_validation():
    with pytest.raises(ValueError):
        ScatterSpec(30, 10, 31, 1)
    with pytest.raises(ValueError):
        ScatterSpec(source="mersenne")


def test_scatter_line_format(tmp_path):
    t = PiFractionTable((141592 * 10**24, 265358 * 10**24))
    path, _ = scatter_export(ScatterSpec(2, 1, 1, 2), SamplerState(t), tmp_path / "p.dat")
    assert path.read_text() == "0.14159 0.26536\n"


def test_scatter_export_with_plot(tmp_path, table):
    path, m = scatter_export(ScatterSpec(30, 100), SamplerState(table), tmp_path / "s.dat", plot_script=True)
    assert len(path.read_text().splitlines()) == 100
    plt = (tmp_path / "s.plt").read_text()
    assert '"s.dat"' in plt and "x27" in plt and "x28" in plt
