import math

import numpy as np
import pytest

from rayarray.cli import main
from rayarray.experiments import (ExperimentConfig, load_config, parse_config_text,
                                  run_beam_pattern, run_cost, run_multi_user, run_single_user)


def data_rows(text):
    return [l.split(",") for l in text.splitlines() if not l.startswith("#")]


def test_parse_config_text():
    vals = parse_config_text("""
        # comment
        experiment = single-user
        M = 8
        eta_max = 0.25pi
        snr_grid_db = -10:10:5
        methods = greedy, exhaustive
        D =
    """)
    assert vals["experiment"] == "single_user"
    assert vals["M"] == 8
    assert vals["eta_max"] == pytest.approx(0.25 * math.pi)
    assert vals["snr_grid_db"] == (-10.0, -5.0, 0.0, 5.0, 10.0)
    assert vals["methods"] == ("greedy", "exhaustive")
    assert vals["D"] is None


@pytest.mark.parametrize("text", ["bogus = 1", "M 8", "M = eight"])
def test_parse_config_errors(text):
    with pytest.raises(ValueError):
        parse_config_text(text)


@pytest.mark.parametrize("kw", [dict(snr_grid_db=(0.0, -1.0)), dict(trials=0),
                                dict(methods=("magic",)), dict(experiment="nope"),
                                dict(snr_grid_db=(0.0, float("inf")))])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        ExperimentConfig(**kw)


def test_config_file_and_overrides(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("experiment = cost\nn_rf = 2\nseed = 3\n")
    cfg = load_config(p, seed=9)
    assert cfg.experiment == "cost" and cfg.n_rf == 2 and cfg.seed == 9


def test_cost_defaults():
    res = run_cost(ExperimentConfig(experiment="cost"))
    rows = data_rows(res.csv_text)
    assert rows[1] == ["raa", "1", "25", "16", "7.00", "0.0069"]
    assert rows[2] == ["hbf", "1", "16", "16", "1015.20", "1.0000"]


def test_cost_zero_prices():
    res = run_cost(ExperimentConfig(experiment="cost", p_sw=0, p_ant=0, p_ps=0))
    rows = data_rows(res.csv_text)
    assert rows[1][4:] == ["0.00", "undefined"] and rows[2][4] == "0.00"


def test_cost_m_sweep():
    res = run_cost(ExperimentConfig(experiment="cost", cost_m_values=tuple(range(4, 65))))
    ratios = [r.mean for r in res.table.select(metric="ratio_to_hbf")]
    assert len(ratios) == 61 and max(ratios) < 1


def test_beam_pattern_single_point():
    res = run_beam_pattern(ExperimentConfig(experiment="beam_pattern", theta_points=1,
                                            theta_min=0.0, theta_max=0.0))
    mdb = res.samples[("raa", "isotropic", "max_magnitude_dB")]
    assert mdb.shape == (1,)


def test_beam_pattern_defaults(tmp_path):
    out = tmp_path / "bp.csv"
    res = run_beam_pattern(ExperimentConfig(experiment="beam_pattern", out=str(out)))
    t = res.table
    # isotropic: same boresight gain
    assert t.value(architecture="raa", pattern="isotropic", metric="max_magnitude_dB_at_0") == \
        pytest.approx(t.value(architecture="hbf", pattern="isotropic", metric="max_magnitude_dB_at_0"),
                      abs=1e-9)
    sweep = tmp_path / "bp_raa_directional.csv"
    assert sweep.exists() and (tmp_path / "bp_hbf_isotropic.csv").exists()
    rows = data_rows(sweep.read_text())
    assert len(rows) == 2002 and len(rows[0]) == 1 + 13 + 1


def test_raa_directional_peaks_exceed_hbf(raa8):
    from rayarray import beam_pattern_sweep, build_hbf_codebook
    from rayarray.response import HBF_DIRECTIONAL, RAA_DIRECTIONAL
    a = beam_pattern_sweep(raa8, RAA_DIRECTIONAL, raa8.eta).max_magnitude
    b = beam_pattern_sweep(build_hbf_codebook(8), HBF_DIRECTIONAL, raa8.eta).max_magnitude
    assert np.all(a > b)


def test_single_user_slope():
    res = run_single_user(ExperimentConfig(experiment="single_user", trials=20))
    for arch in ("raa", "hbf"):
        for kind in ("isotropic", "directional"):
            rows = res.table.select(architecture=arch, pattern=kind, metric="max_snr_db")
            means = np.array([r.mean for r in rows])
            np.testing.assert_allclose(np.diff(means), 2.0, atol=1e-9)


def test_multi_user_small_run(tmp_path):
    sel = tmp_path / "sel.csv"
    cfg = ExperimentConfig(experiment="multi_user", trials=2, snr_grid_db=(0.0, 10.0),
                           pattern="directional", selections_out=str(sel), out=str(tmp_path / "mu.csv"))
    res = run_multi_user(cfg)
    assert len(res.table.select(metric="greedy_gap")) == 4
    for arch in ("raa", "hbf"):
        gap = res.samples[(arch, "directional", "greedy_gap")]
        assert np.all(gap >= 0)
    head = sel.read_text().splitlines()[0]
    assert head == "trial,architecture,pattern,transmit_snr_db,method,indices,rate,evaluations"
    assert "53130" in sel.read_text() and ",115" in sel.read_text()


def test_multi_user_cap_exceeded_cli(tmp_path, capsys):
    code = main(["multi-user", "--trials", "1", "--set", "exhaustive_cap=100",
                 "--out", str(tmp_path / "x.csv")])
    assert code == 3
    assert "cap" in capsys.readouterr().err


def test_cli_config_error(capsys):
    assert main(["cost", "--set", "nonsense=1"]) == 2
    assert "config error" in capsys.readouterr().err
    assert main(["cost", "--config", "/does/not/exist"]) == 2


def test_cli_stdout(capsys):
    assert main(["cost"]) == 0
    out = capsys.readouterr().out
    assert "raa,1,25,16,7.00,0.0069" in out
    assert "# seed = 0" in out


@pytest.mark.parametrize("argv", [
    ["single-user", "--trials", "5", "--seed", "11"],
    ["multi-user", "--trials", "1", "--seed", "5", "--set", "snr_grid_db=0", "--pattern", "isotropic"],
    ["beam-pattern", "--set", "theta_points=101"],
    ["cost"],
])
def test_cli_rerun_is_bit_identical(tmp_path, argv):
    out = tmp_path / "a.csv"
    assert main(argv + ["--out", str(out)]) == 0
    first = out.read_bytes()
    out.unlink()
    assert main(argv + ["--out", str(out)]) == 0
    assert out.read_bytes() == first
