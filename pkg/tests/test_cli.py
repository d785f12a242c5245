from pathlib import Path

import numpy as np
import pytest

from pifrac import cli
from pifrac.benchmarks import default_spec, evaluate_batch
from pifrac.gasr import GasrConfig, evaluation_budget, run
from pifrac.sampling import branch_alignment, pearson
from pifrac.table import fixture_table, load_table

HALTON_27_28 = 0.1726613962051898


def read_manifest(path):
    out = {}
    for line in path.read_text().splitlines():
        key, _, value = line.partition("=")
        out.setdefault(key, []).append(value)
    return out


def check_manifest(path, command):
    m = read_manifest(path)
    assert m["command"] == [command]
    assert float(m["timing.seconds"][0]) >= 0
    for out in m["output"]:
        assert Path(out).exists()
    return m


def test_digits(capsys):
    assert cli.main(["digits", "--position", "1000000", "--count", "24"]) == 0
    assert capsys.readouterr().out.strip() == "26C65E52CB459350050E4BB1"
    assert cli.main(["digits", "--position", "1", "--count", "8"]) == 0
    assert capsys.readouterr().out.strip() == "243F6A88"


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        cli.main(["digits", "--position", "1", "--count", "-1"])
    assert exc.value.code == cli.EXIT_USAGE


def test_accuracy_error_exit_code(capsys):
    assert cli.main(["digits", "--position", "5", "--count", "100", "--no-reanchor"]) == cli.EXIT_ACCURACY
    assert "accuracy" in capsys.readouterr().err


def test_file_error_exit_code(tmp_path):
    code = cli.main(["stats", "--table", str(tmp_path / "none.txt"), "--out", str(tmp_path / "s.txt")])
    assert code == cli.EXIT_FILE
    bad = tmp_path / "bad.txt"
    bad.write_text("5\n0.100000000000000000000000000000\n")
    assert cli.main(["stats", "--table", str(bad), "--out", str(tmp_path / "s.txt")]) == cli.EXIT_FILE


def test_gen(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert cli.main(["gen", "--count", "300", "--out", str(a)]) == 0
    assert cli.main(["gen", "--count", "300", "--out", str(b)]) == 0
    lines = a.read_text().splitlines()
    assert lines[0] == "300" and len(lines) == 301
    assert lines[1].startswith("0.141592")
    assert a.read_bytes() == b.read_bytes()
    assert load_table(a).scaled == fixture_table().scaled[:300]
    m = check_manifest(tmp_path / "a.txt.manifest", "gen")
    assert m["param.count"] == ["300"]


def test_stats(tmp_path):
    out = tmp_path / "pdf.txt"
    assert cli.main(["stats", "--bins", "100", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    n = int(lines[2].split(":")[1])
    mean = float(lines[3].split(":")[1])
    rows = np.array([[float(v) for v in ln.split()] for ln in lines[6:]])
    counts = rows[:, 1] * n / 100
    chi2 = float(np.sum((counts - n / 100) ** 2) / (n / 100))
    assert chi2 < 148.23
    assert rows[-1, 2] == 1.0
    assert abs(mean - 0.5) < 0.01
    assert "Created (timestamp not recorded)" in lines
    m = check_manifest(tmp_path / "pdf.txt.manifest", "stats")
    assert "created" not in m


def test_stats_timestamp_is_opt_in(tmp_path):
    out = tmp_path / "pdf.txt"
    cli.main(["stats", "--bins", "10", "--timestamp", "--out", str(out)])
    assert out.read_text().splitlines()[1].startswith("Created 2")
    assert "created" in read_manifest(tmp_path / "pdf.txt.manifest")


def _emitted(path):
    d = np.loadtxt(path)
    return d[:, 0], d[:, 1]


def _tol(branch):
    # the file keeps 5 decimals, so y - frac(b*x) can be off by (b + 1) * 5e-6
    return (branch + 1) * 0.5e-5 + 1e-9


@pytest.mark.filterwarnings("ignore:.*exceed the")
def test_scatter_alignment(tmp_path):
    p = tmp_path / "s1.dat"
    assert cli.main(["scatter", "--out", str(p), "--plot-script"]) == 0
    x, y = _emitted(p)
    assert len(x) == 1000
    assert branch_alignment(x, y, 16, _tol(16)) >= 0.999
    assert (tmp_path / "s1.plt").exists()
    check_manifest(tmp_path / "s1.dat.manifest", "scatter")

    p = tmp_path / "s2.dat"
    cli.main(["scatter", "--dim-b", "29", "--out", str(p)])
    x, y = _emitted(p)
    assert branch_alignment(x, y, 256, _tol(256)) >= 0.999
    assert branch_alignment(x, y, 16, _tol(16)) < 0.1


def test_scatter_halton_pearson(tmp_path):
    p = tmp_path / "h.dat"
    cli.main(["scatter", "--source", "halton", "--out", str(p)])
    x, y = _emitted(p)
    assert pearson(x, y) == pytest.approx(HALTON_27_28, abs=1e-6)


def test_scatter_clock_start_is_opt_in(tmp_path):
    p = tmp_path / "c.dat"
    cli.main(["scatter", "--points", "10", "--out", str(p)])
    assert "clock_start_index" not in read_manifest(tmp_path / "c.dat.manifest")
    cli.main(["scatter", "--points", "10", "--clock-start", "--out", str(p)])
    assert "clock_start_index" in read_manifest(tmp_path / "c.dat.manifest")


def test_gasr_reports(tmp_path, capsys):
    args = ["gasr", "--function", "exponential", "--dims", "10", "--population", "200", "--out"]
    assert cli.main(args + [str(tmp_path / "a")]) == 0
    assert cli.main(args + [str(tmp_path / "b")]) == 0
    ra = (tmp_path / "a" / "exponential_10D_Run1.txt").read_bytes()
    assert ra == (tmp_path / "b" / "exponential_10D_Run1.txt").read_bytes()

    # evaluations in the summary equal an independent count of objective calls
    calls = 0
    spec = default_spec("exponential", 10)

    def counted(x):
        nonlocal calls
        calls += len(x)
        return evaluate_batch(spec, x)

    run(GasrConfig(spec, fixture_table(), population=200, objective=counted))
    summary = (tmp_path / "a" / "exponential_10D_summary.txt").read_text()
    assert f"evaluations {calls} " in summary
    check_manifest(tmp_path / "a" / "exponential_10D_summary.txt.manifest", "gasr")


def test_gasr_repeats(tmp_path):
    out = tmp_path / "r"
    assert cli.main(["gasr", "--function", "ackley", "--dims", "5", "--population", "40", "--generations", "30",
                     "--repeats", "3", "--out", str(out)]) == 0
    reports = sorted(out.glob("ackley_5D_Run*.txt"))
    assert len(reports) == 3
    assert len({r.read_bytes() for r in reports}) == 3
    assert (out / "ackley_5D_summary.txt").read_text().splitlines()[-1].startswith("best-of: run ")


def test_gasr_unknown_function(tmp_path):
    assert cli.main(["gasr", "--function", "nosuch", "--dims", "2", "--out", str(tmp_path)]) == cli.EXIT_USAGE


@pytest.mark.parametrize("jobs", ["1", "2"])
def test_bench(tmp_path, jobs):
    out = tmp_path / "bench.tsv"
    assert cli.main(["bench", "--jobs", jobs, "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("#") and "literature" in lines[1]
    header = lines[2].split("\t")
    rows = [dict(zip(header, ln.split("\t"))) for ln in lines[3:]]
    assert [r["function"] for r in rows] == ["ackley", "cosine_mixture", "exponential", "griewank", "rastrigin", "schwefel"]
    budget = evaluation_budget(200, 100)
    assert budget == 200 * 3 * 100 + 200
    for r in rows:
        assert int(r["neval"]) <= budget
    assert rows[0]["lit_gasr_neval"] == "656308" and rows[0]["lit_gasr_best"] == "-5.762878e-4"
    check_manifest(tmp_path / "bench.tsv.manifest", "bench")
