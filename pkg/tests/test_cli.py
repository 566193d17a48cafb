import json

import pytest

from peertriage.cli import main
from peertriage.config import (CorpusConfig, PipelineConfig, SimulationConfig,
                               save_config)
from peertriage.corpus import load_corpus


@pytest.fixture
def tiny_config_path(tmp_path):
    cfg = PipelineConfig(
        corpus=CorpusConfig(n=300, fraud_rate=0.1, seed=5),
        simulation=SimulationConfig(rounds=2, n_per_round=300, master_seed=5))
    path = tmp_path / "config.json"
    save_config(cfg, path)
    return path


class TestGenerate:
    def test_writes_corpus(self, tmp_path, capsys):
        out = tmp_path / "corpus.jsonl"
        rc = main(["generate", "--n", "120", "--fraud-rate", "0.25",
                   "--seed", "3", "--out", str(out)])
        assert rc == 0
        corpus = load_corpus(out)
        assert len(corpus) == 120
        assert sum(1 for m in corpus if m.truth.fraud) == 30
        assert "120 manuscripts (30 fraudulent)" in capsys.readouterr().out

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        main(["generate", "--n", "50", "--seed", "9", "--out", str(a)])
        main(["generate", "--n", "50", "--seed", "9", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestSimulate:
    def test_outputs(self, tmp_path, tiny_config_path, capsys):
        out = tmp_path / "run"
        rc = main(["simulate", "--config", str(tiny_config_path),
                   "--out", str(out)])
        assert rc == 0
        report = json.loads((out / "report.json").read_text())
        assert len(report["rounds"]) == 2
        rounds = (out / "rounds.jsonl").read_text().splitlines()
        assert len(rounds) == 2
        assert (out / "roc_semi.csv").read_text().startswith("fa,hit\n")
        assert (out / "roc_traditional.csv").exists()
        assert "AUC semi-automated" in capsys.readouterr().out

    def test_byte_identical_replay(self, tmp_path, tiny_config_path):
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        main(["simulate", "--config", str(tiny_config_path), "--out", str(out1)])
        main(["simulate", "--config", str(tiny_config_path), "--out", str(out2)])
        for name in ("report.json", "rounds.jsonl", "roc_semi.csv",
                     "roc_traditional.csv"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name


class TestRoc:
    def test_theoretical_csv(self, tmp_path, capsys):
        out = tmp_path / "roc.csv"
        rc = main(["roc", "--dprime", "1.0", "--points", "256",
                   "--out", str(out)])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "fa,hit"
        assert len(lines) == 1 + 256 + 2

    def test_from_log(self, tmp_path, tiny_config_path, capsys):
        run_dir = tmp_path / "run"
        main(["simulate", "--config", str(tiny_config_path),
              "--out", str(run_dir)])
        out = tmp_path / "empirical.csv"
        rc = main(["roc", "--from-log", str(run_dir / "rounds.jsonl"),
                   "--out", str(out)])
        assert rc == 0
        assert out.read_text().startswith("fa,hit\n")

    def test_requires_source(self, capsys):
        assert main(["roc"]) == 2


class TestReport:
    def test_prints_table(self, tmp_path, tiny_config_path, capsys):
        run_dir = tmp_path / "run"
        main(["simulate", "--config", str(tiny_config_path),
              "--out", str(run_dir)])
        capsys.readouterr()
        rc = main(["report", "--log", str(run_dir)])
        assert rc == 0
        out = capsys.readouterr().out
        assert "round" in out and "d_prime" in out
        assert "AUC semi-automated" in out

    def test_missing_dir(self, tmp_path, capsys):
        assert main(["report", "--log", str(tmp_path / "nope")]) == 2
