"""Command-line surface: outputs, exit codes, config files."""

import json

import pytest

from specshare.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------- theory


def test_theory_uu_asymmetric(capsys):
    code, out, _ = run(
        capsys, "theory", "--scenario", "uu", "--level", "asymmetric",
        "--f", "1", "--alpha", "4", "--gamma", "1",
    )
    assert code == 0
    assert "secondary_throughput_factor=1/4 (0.25)" in out
    assert "optimal_alpha_bar=2" in out
    assert "feasible=yes" in out


def test_theory_dd_default_level(capsys):
    code, out, _ = run(capsys, "theory", "--scenario", "dd", "--f", "0.3")
    assert code == 0
    assert "secondary_throughput_factor=1 (1)" in out


def test_theory_ud_symmetric_high_f(capsys):
    code, out, _ = run(
        capsys, "theory", "--scenario", "ud", "--level", "symmetric", "--f", "0.6", "--gamma", "1"
    )
    assert code == 0
    assert "secondary_throughput_factor=0 (0)" in out


def test_theory_requires_level_for_uu(capsys):
    code, _, err = run(capsys, "theory", "--scenario", "uu", "--f", "0.5")
    assert code == 2
    assert "level" in err


def test_theory_validation_exit_code(capsys):
    code, _, err = run(
        capsys, "theory", "--scenario", "uu", "--level", "asymmetric", "--f", "0"
    )
    assert code == 2
    assert "protection factor" in err


# ---------------------------------------------------------------- crossover


def test_crossover_uu_both_levels(capsys):
    code, out, _ = run(capsys, "crossover", "--scenario", "uu", "--alpha", "4", "--gamma", "1")
    assert code == 0
    assert "symmetric: (1/2, 1]" in out
    assert "asymmetric: (5/7, 1]" in out


def test_crossover_uu_nakagami_caption_values(capsys):
    code, out, _ = run(capsys, "crossover", "--scenario", "uu", "--alpha", "4", "--gamma", "1.5")
    assert code == 0
    assert "symmetric: (26/35, 1]" in out
    assert "asymmetric: (14/17, 1]" in out


def test_crossover_du(capsys):
    code, out, _ = run(capsys, "crossover", "--scenario", "du", "--gamma", "1.5")
    assert code == 0
    assert "(3/5, 1]" in out


def test_crossover_empty_below_threshold(capsys):
    code, out, _ = run(capsys, "crossover", "--scenario", "uu", "--alpha", "1", "--gamma", "1")
    assert code == 0
    assert "asymmetric: empty" in out


def test_crossover_gamma_below_one_note_and_refusal(capsys):
    code, out, _ = run(capsys, "crossover", "--scenario", "uu", "--alpha", "4", "--gamma", "0.5")
    assert code == 0  # asymmetric still printed, symmetric noted
    assert "asymmetric: (" in out
    assert "no closed form" in out
    code, _, err = run(
        capsys, "crossover", "--scenario", "uu", "--level", "symmetric",
        "--alpha", "4", "--gamma", "0.5",
    )
    assert code == 3
    assert "gamma" in err


# ---------------------------------------------------------------- sweeps


def test_sweep_writes_csv_and_sidecar(tmp_path, capsys):
    out_path = tmp_path / "dd.csv"
    code, out, _ = run(
        capsys, "sweep", "--scenario", "dd", "--alpha", "3", "--p-db", "10", "--n-db", "0",
        "--n", "100,1000", "--trials", "5", "--seed", "7", "--out", str(out_path),
    )
    assert code == 0
    assert str(out_path) in out
    lines = out_path.read_text().splitlines()
    assert lines[0] == "n,trial,actual_rate,intermediate_rate,asymptotic,ratio"
    assert len(lines) == 11
    meta = json.loads((tmp_path / "dd.json").read_text())
    assert meta["scenario"] == "dd" and meta["seed"] == 7


def test_sweep_seed_required(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--scenario", "dd", "--n", "100"])
    assert exc.value.code == 2


def test_sweep_budget_exit_code(tmp_path, capsys):
    code, _, err = run(
        capsys, "sweep", "--scenario", "uu", "--level", "symmetric", "--n", "100,100000",
        "--trials", "100000", "--seed", "1", "--out", str(tmp_path / "x.csv"),
    )
    assert code == 3
    assert "budget" in err


def test_concentrate_runs(tmp_path, capsys):
    out_path = tmp_path / "conc.csv"
    code, out, _ = run(
        capsys, "concentrate", "--model", "rayleigh", "--stat", "max",
        "--n", "1000,10000", "--trials", "20", "--seed", "1", "--out", str(out_path),
    )
    assert code == 0
    assert out_path.exists()
    agg = (tmp_path / "conc.agg.csv").read_text().splitlines()
    assert agg[0] == "n,mean_ratio,median_ratio,stddev_ratio"
    assert len(agg) == 3


def test_concentrate_bad_model_exit_code(capsys):
    code, _, err = run(
        capsys, "concentrate", "--model", "rice", "--stat", "max",
        "--n", "100", "--trials", "5", "--seed", "1",
    )
    assert code == 2
    assert "model" in err


def test_factors_command(capsys):
    code, out, _ = run(
        capsys, "factors", "--scenario", "uu", "--level", "symmetric",
        "--alpha", "4", "--gamma", "1", "--f-step", "0.25",
    )
    assert code == 0
    assert "crossover: (0.5, 1.0]" in out


# ---------------------------------------------------------------- scenario


def test_scenario_single_shot(capsys):
    code, out, _ = run(
        capsys, "scenario", "--scenario", "uu", "--level", "symmetric",
        "--n", "8", "--alpha", "1", "--f", "0.5", "--seed", "3",
    )
    assert code == 0
    assert "primary_rate=" in out and "secondary_rate=" in out
    assert "bits/use" in out


def test_scenario_oracle_row(capsys):
    code, out, _ = run(
        capsys, "scenario", "--scenario", "uu", "--level", "symmetric",
        "--n", "8", "--alpha", "1", "--f", "0.5", "--seed", "3", "--oracle",
    )
    assert code == 0
    assert "li_secondary" in out and "jo_secondary" in out and "ub_secondary" in out
    assert "violations=0" in out


def test_scenario_oracle_size_refusal(capsys):
    code, _, err = run(
        capsys, "scenario", "--scenario", "uu", "--level", "symmetric",
        "--n", "20", "--alpha", "1", "--f", "0.5", "--seed", "3", "--oracle",
    )
    assert code == 3
    assert "capped" in err


# ---------------------------------------------------------------- config files


def test_config_file_supplies_defaults(tmp_path, capsys):
    config = tmp_path / "run.cfg"
    config.write_text("alpha=4\ngamma=1\n")
    code, out, _ = run(
        capsys, "crossover", "--config", str(config), "--scenario", "uu"
    )
    assert code == 0
    assert "asymmetric: (5/7, 1]" in out


def test_config_file_flag_overrides(tmp_path, capsys):
    config = tmp_path / "run.cfg"
    config.write_text("alpha=2\ngamma=1\n")
    code, out, _ = run(
        capsys, "crossover", "--config", str(config), "--scenario", "uu", "--alpha", "4"
    )
    assert code == 0
    assert "asymmetric: (5/7, 1]" in out  # alpha=4 from the flag wins


def test_config_file_unknown_key_rejected(tmp_path, capsys):
    config = tmp_path / "run.cfg"
    config.write_text("bogus=1\n")
    code, _, err = run(capsys, "crossover", "--config", str(config), "--scenario", "uu")
    assert code == 2
    assert "unknown key" in err


# ---------------------------------------------------------------- help text


def test_help_mentions_units(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    assert "dB" in out
    assert "--seed" in out
    assert "--jobs" in out
