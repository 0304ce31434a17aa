import json

import pytest

from timepref.cli import EXIT_CONFIG, EXIT_IO, EXIT_MODEL, main

SHORT = "schedule: {dt: 1/24, t_p: 1/4, t_max: 1}\npopulation: {n_agents: 10}\n"


@pytest.fixture
def doc(tmp_path):
    path = tmp_path / "doc.yaml"
    path.write_text(SHORT + "interaction: {eps_k: 0.1}\nname: cli\n")
    return path


def test_run_config(doc, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["run", "--config", str(doc), "--seeds", "2", "--out", str(out)]) == 0
    index = json.loads((out / "index.json").read_text())
    assert index["cli"]["seeds"] == [0, 1]
    assert "cli: seeds=2" in capsys.readouterr().out


def test_seed_flag(doc, tmp_path):
    out = tmp_path / "out"
    assert main(["run", "--config", str(doc), "--seed", "42", "--out", str(out)]) == 0
    assert (out / "cli" / "seed_42" / "agents.csv").exists()


def test_sweep(doc, tmp_path):
    out = tmp_path / "sw"
    assert main(["sweep", "--config", str(doc), "--vary", "eps_c=0,0.1", "--out", str(out)]) == 0
    assert set(json.loads((out / "index.json").read_text())) == {"cli_eps_c-0", "cli_eps_c-0.1"}


def test_presets_listing(capsys):
    assert main(["presets"]) == 0
    listing = capsys.readouterr().out
    assert "fig6-grid" in listing and "baseline" in listing
    assert main(["presets", "--show", "fig2"]) == 0
    assert "eps_k: 0.1" in capsys.readouterr().out


def test_config_error(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("interaction: {eps_k: 3}\n")
    assert main(["run", "--config", str(bad), "--out", str(tmp_path / "o")]) == EXIT_CONFIG
    assert "eps_k" in capsys.readouterr().err


def test_missing_file(tmp_path):
    assert main(["run", "--config", str(tmp_path / "none.yaml")]) == EXIT_IO


def test_model_error(tmp_path, capsys):
    # a sudden jump to a very patient rate on a small capital stock forces c_A < 0
    doc = tmp_path / "m.yaml"
    doc.write_text(
        "schedule: {dt: 1/24, t_p: 1/4, t_max: 1}\n"
        "population: {n_agents: 2, rho0: 0.5}\n"
        "economy: {theta: 0.2}\n"
        "interaction: {eps_rho: 1.0, rho_norm: 0.01}\n"
    )
    code = main(["run", "--config", str(doc), "--out", str(tmp_path / "o")])
    assert code == EXIT_MODEL
    assert "agent=" in capsys.readouterr().err
