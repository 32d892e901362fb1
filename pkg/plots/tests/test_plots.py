"""Plot pipeline tests, including the acceptance check (A10): each figure
kind renders a non-empty image from canonical benchmark CSVs with exit
status 0, and the histogram markers match values recomputed from the CSV.

The fixtures shell out to the installed `oasbench` CLI; the plotting
package itself never imports the benchmark package.
"""

import csv
import math
import subprocess
import sys

import pytest

from oasplots.cli import main
from oasplots.data import PlotDataError, load_events
from oasplots.figures import FigureSpec, plot_fixed_target, plot_scaling, plot_switch_hist


def _bench(*args):
    res = subprocess.run(["oasbench", *args], capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    return res


@pytest.fixture(scope="session")
def scaling_csv(tmp_path_factory):
    root = tmp_path_factory.mktemp("scaling")
    cfg = root / "sweep.yaml"
    cfg.write_text(
        "master_seed: 404\n"
        "reps: 5\n"
        "configs:\n"
        "  - {algo: opo-ea, n: [64, 128, 256]}\n"
        "  - {algo: oas-stagnation, n: [64, 128, 256]}\n",
        encoding="utf-8")
    out = root / "scaling.csv"
    _bench("sweep", "--config", str(cfg), "--workers", "2", "--out", str(out))
    return out


@pytest.fixture(scope="session")
def fixed_target_csv(tmp_path_factory):
    root = tmp_path_factory.mktemp("ft")
    a = root / "ea.csv"
    b = root / "ga.csv"
    _bench("run", "--algo", "opo-ea", "--n", "256", "--reps", "5",
           "--seed", "405", "--out", str(a))
    _bench("run", "--algo", "ollga", "--n", "256", "--reps", "5",
           "--seed", "405", "--out", str(b))
    return a, b


@pytest.fixture(scope="session")
def switch_csv(tmp_path_factory):
    root = tmp_path_factory.mktemp("sw")
    out = root / "switch.csv"
    _bench("run", "--algo", "oas-stagnation", "--n", "512", "--reps", "80",
           "--seed", "406", "--out", str(out))
    return out


@pytest.fixture(scope="session")
def hh_csv(tmp_path_factory):
    root = tmp_path_factory.mktemp("hh")
    out = root / "hh.csv"
    _bench("run", "--algo", "hh", "--n", "64", "--reps", "2",
           "--seed", "407", "--out", str(out))
    return out


def _plot_cli(*args):
    return subprocess.run([sys.executable, "-m", "oasplots.cli", *args],
                          capture_output=True, text=True)


def test_a10_plot_pipeline(scaling_csv, fixed_target_csv, switch_csv, tmp_path):
    out_scaling = tmp_path / "scaling.png"
    res = _plot_cli("--kind", "scaling", "--in", str(scaling_csv),
                    "--norm", "n_ln_n", "--out", str(out_scaling))
    assert res.returncode == 0, res.stderr
    assert out_scaling.stat().st_size > 0

    out_ft = tmp_path / "ft.png"
    res = _plot_cli("--kind", "fixed_target",
                    "--in", f"{fixed_target_csv[0]},{fixed_target_csv[1]}",
                    "--out", str(out_ft))
    assert res.returncode == 0, res.stderr
    assert out_ft.stat().st_size > 0

    out_sw = tmp_path / "switch.png"
    res = _plot_cli("--kind", "switch_hist", "--in", str(switch_csv),
                    "--out", str(out_sw))
    assert res.returncode == 0, res.stderr
    assert out_sw.stat().st_size > 0

    # histogram markers must equal values recomputed from the CSV's n and k
    meta = plot_switch_hist(FigureSpec(kind="switch_hist",
                                       inputs=[str(switch_csv)],
                                       out=str(tmp_path / "switch2.png")))
    with open(switch_csv, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.DictReader(fh) if r["event_type"] == "switch"]
    assert rows
    n = int(rows[0]["n"])
    k = int(rows[0]["k"])
    assert meta["d_guard"] == pytest.approx(2 * math.e * n * math.log(n) / k)
    assert meta["d_prime"] == pytest.approx(n / math.log(n) ** 2)
    print(f"A10 plot pipeline: PASS (3 figures, markers guard={meta['d_guard']:.2f} "
          f"band={meta['d_prime']:.2f} match CSV recomputation)",
          file=sys.__stdout__, flush=True)


def test_scaling_requires_two_sizes(switch_csv, tmp_path):
    spec = FigureSpec(kind="scaling", inputs=[str(switch_csv)],
                      out=str(tmp_path / "x.png"))
    with pytest.raises(PlotDataError, match="2 distinct n"):
        plot_scaling(spec)


def test_scaling_names_config_without_terminal_events(scaling_csv, tmp_path, monkeypatch):
    df = load_events([str(scaling_csv)])
    broken = tmp_path / "broken.csv"
    df[df["event_type"] != "optimum"].drop(columns="source").to_csv(broken, index=False)
    spec = FigureSpec(kind="scaling", inputs=[str(broken)],
                      out=str(tmp_path / "x.png"))
    with pytest.raises(PlotDataError, match=r"algo=oas-stagnation, n=64"):
        plot_scaling(spec)


def test_scaling_metadata_series(scaling_csv, tmp_path):
    spec = FigureSpec(kind="scaling", inputs=[str(scaling_csv)],
                      out=str(tmp_path / "s.png"), norm="n_ln_n")
    meta = plot_scaling(spec)
    assert set(meta["series"]) == {"opo-ea", "oas-stagnation"}
    assert set(meta["series"]["opo-ea"]) == {64, 128, 256}
    # normalized EA curve sits near its classical constant
    for n, val in meta["series"]["opo-ea"].items():
        assert 1.0 <= val <= 4.0


def test_fixed_target_default_grid_and_curves(fixed_target_csv, tmp_path):
    spec = FigureSpec(kind="fixed_target",
                      inputs=[str(p) for p in fixed_target_csv],
                      out=str(tmp_path / "ft.png"))
    meta = plot_fixed_target(spec)
    assert meta["targets"] == sorted(meta["targets"], reverse=True)
    assert set(meta["curves"]) == {"opo-ea", "ollga"}
    # times grow as the target tightens (distance shrinks)
    for curve in meta["curves"].values():
        finite = [v for v in curve if v == v]
        assert finite == sorted(finite)


def test_fixed_target_rejects_empty_targets(fixed_target_csv, tmp_path):
    spec = FigureSpec(kind="fixed_target", inputs=[str(fixed_target_csv[0])],
                      out=str(tmp_path / "x.png"), targets=[])
    with pytest.raises(PlotDataError, match="empty target list"):
        plot_fixed_target(spec)


def test_fixed_target_single_run_no_band(tmp_path):
    _bench("run", "--algo", "opo-ea", "--n", "64", "--reps", "1",
           "--seed", "9", "--out", str(tmp_path / "one.csv"))
    spec = FigureSpec(kind="fixed_target", inputs=[str(tmp_path / "one.csv")],
                      out=str(tmp_path / "one.png"))
    meta = plot_fixed_target(spec)
    assert (tmp_path / "one.png").stat().st_size > 0
    assert len(meta["curves"]) == 1


def test_switch_hist_rejects_hh_input(hh_csv, tmp_path):
    spec = FigureSpec(kind="switch_hist", inputs=[str(hh_csv)],
                      out=str(tmp_path / "x.png"))
    with pytest.raises(PlotDataError, match="no switch events"):
        plot_switch_hist(spec)


def test_oracle_switch_hist_concentrates_at_threshold(tmp_path):
    out = tmp_path / "oracle.csv"
    _bench("run", "--algo", "oas-oracle", "--n", "256", "--reps", "20",
           "--seed", "408", "--out", str(out))
    meta = plot_switch_hist(FigureSpec(kind="switch_hist", inputs=[str(out)],
                                       out=str(tmp_path / "o.png")))
    assert meta["switches"] == 20
    assert meta["d_guard"] is None  # no stagnation threshold in oracle runs
    with open(out, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.DictReader(fh) if r["event_type"] == "switch"]
    d_switch = int(rows[0]["d_switch"])
    assert all(int(r["distance"]) <= d_switch for r in rows)


def test_cli_missing_file_exits_one(tmp_path):
    res = _plot_cli("--kind", "scaling", "--in", str(tmp_path / "nope.csv"),
                    "--out", str(tmp_path / "x.png"))
    assert res.returncode == 1
    assert "not found" in res.stderr


def test_cli_rejects_norm_on_histogram(switch_csv, tmp_path):
    code = main(["--kind", "switch_hist", "--in", str(switch_csv),
                 "--norm", "n_ln_n", "--out", str(tmp_path / "x.png")])
    assert code == 1


def test_figure_generation_is_deterministic(scaling_csv, tmp_path):
    spec1 = FigureSpec(kind="scaling", inputs=[str(scaling_csv)],
                       out=str(tmp_path / "a.png"))
    spec2 = FigureSpec(kind="scaling", inputs=[str(scaling_csv)],
                       out=str(tmp_path / "b.png"))
    assert plot_scaling(spec1)["series"] == plot_scaling(spec2)["series"]
