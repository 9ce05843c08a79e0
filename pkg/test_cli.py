#!/usr/bin/env python3
"""
Tests for the cliffverify command line.
"""

import json
from pathlib import Path

import pytest

from src.cli import CliffverifyCLI, UsageError, create_parser, main
from src.config import CliffverifyConfig
from src.paper_catalog import GOLDEN_TABLES, convention_fingerprint
from src.reports import VerificationReport

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    """Run every command from an empty directory with a clean environment."""
    for name in ("CLIFFVERIFY_GOLDEN_DIR", "CLIFFVERIFY_WORKERS", "CLIFFVERIFY_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)
    return tmp_path


class TestParser:
    """Argument parsing."""

    def test_no_command(self, capsys):
        assert main([]) == 2
        assert "verify" in capsys.readouterr().out

    def test_unknown_suite(self):
        with pytest.raises(SystemExit) as info:
            main(["verify", "bogus"])
        assert info.value.code == 2

    def test_common_options(self):
        args = create_parser().parse_args(["verify", "lie", "--check", "iso", "--check", "split", "-w", "4"])
        assert args.check == ["iso", "split"]
        assert args.workers == 4
        assert args.format == "json"


class TestVerify:
    """verify: exit codes and report formats."""

    def test_clifford_system_json(self, capsys):
        assert main(["verify", "clifford", "--system", "pauli"]) == 0
        out = capsys.readouterr().out
        assert VerificationReport.model_validate_json(out).passed
        report = json.loads(out)
        assert report["suite"] == "clifford"
        assert report["passed"] is True
        assert [item["name"] for item in report["items"]] == ["clifford-relations[pauli]"]
        assert report["fingerprint"] == convention_fingerprint()

    def test_only_selects_entries(self, capsys):
        assert main(["verify", "clifford", "--only", "delta-table", "--only", "unitary-obstruction"]) == 0
        names = [item["name"] for item in json.loads(capsys.readouterr().out)["items"]]
        assert names == ["unitary-obstruction", "delta-table"]

    def test_unknown_only(self, capsys):
        assert main(["verify", "clifford", "--only", "nope"]) == 2
        assert "Unknown check" in capsys.readouterr().err

    def test_lie_text(self, capsys):
        assert main(["verify", "lie", "--check", "split", "--format", "text"]) == 0
        out = capsys.readouterr().out
        assert "p-basis-split" in out
        assert "1/1 passed" in out

    def test_single_table(self, capsys):
        code = main(["verify", "tables", "--golden-dir", str(GOLDEN_DIR), "--only", "table[eqJ1]"])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["items"][0]["provenance"] == "J12..J18"

    def test_missing_golden_dir(self, tmp_path, capsys):
        assert main(["verify", "tables", "--golden-dir", str(tmp_path / "none"), "--only", "table[top]"]) == 2
        assert "Golden file not found" in capsys.readouterr().err

    def test_bad_worker_count(self, capsys):
        assert main(["verify", "clifford", "--system", "pauli", "--workers", "0"]) == 2

    def test_config_warning_uses_log_format(self, isolated, capsys):
        (isolated / "cliffverify_config.json").write_text(json.dumps({"colour": "blue"}))
        assert main(["verify", "clifford", "--system", "pauli"]) == 0
        err = capsys.readouterr().err
        assert "WARNING src.config: Ignoring unknown configuration keys" in err

    def test_bad_environment(self, monkeypatch, capsys):
        monkeypatch.setenv("CLIFFVERIFY_WORKERS", "lots")
        assert main(["verify", "clifford", "--system", "pauli"]) == 2
        assert "CLIFFVERIFY_WORKERS" in capsys.readouterr().err


class TestEmit:
    """emit: tables, systems and forms as JSON lines."""

    def test_omega(self, capsys):
        assert main(["emit", "form", "--name", "omega"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 16
        assert json.loads(lines[0]) == {"form": "omega", "blade": [0, 16], "re": "-1", "im": "0"}

    def test_omega_complex(self, capsys):
        assert main(["emit", "form", "--name", "omega", "--complex"]) == 0
        first = json.loads(capsys.readouterr().out.splitlines()[0])
        assert first == {"form": "omega", "dz": [0], "dzbar": [0], "re": "0", "im": "1/2"}

    def test_system(self, capsys):
        assert main(["emit", "system", "--name", "spin9"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 144
        assert json.loads(lines[0])["matrix"] == "I1"

    def test_unknown_lie_basis(self, capsys):
        assert main(["emit", "lie-basis", "--name", "K"]) == 2

    def test_mul_table(self, capsys):
        assert main(["emit", "mul-table"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["basis"][:4] == ["1", "i", "j", "k"]

    def test_golden_all(self, tmp_path, capsys):
        target = tmp_path / "fresh"
        assert main(["emit", "golden-all", "--golden-dir", str(target)]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["frozen"] == {}
        assert set(summary["files"]) == set(GOLDEN_TABLES)
        assert (target / "top32.jsonl").read_text() == (GOLDEN_DIR / "top32.jsonl").read_text()


class TestBenchAndConfig:
    """bench argument checks and the config command."""

    def test_bad_repetitions(self, capsys):
        assert main(["bench", "tau4-psiC", "--repetitions", "0"]) == 2

    def test_bench_object(self):
        cli = CliffverifyCLI(CliffverifyConfig(golden_dir=str(GOLDEN_DIR)))
        with pytest.raises(UsageError):
            cli.run_bench("tau6")

    @pytest.mark.slow
    def test_bench_tau4_psi_c(self):
        cli = CliffverifyCLI(CliffverifyConfig(golden_dir=str(GOLDEN_DIR)))
        result = cli.run_bench("tau4-psiC", repetitions=1)
        assert result.hash_matches is True
        assert result.output_hash == result.golden_hash
        assert result.metrics["quadruples"] == 126
        assert result.metrics["terms"] == 702

    @pytest.mark.slow
    def test_bench_without_frozen_hash_fails(self, tmp_path, capsys):
        assert main(["bench", "tau4-psiC", "--repetitions", "1", "--golden-dir", str(tmp_path)]) == 1
        result = json.loads(capsys.readouterr().out)
        assert result["golden_hash"] is None
        assert result["hash_matches"] is False

    def test_config_show(self, capsys):
        assert main(["config", "--show"]) == 0
        out = capsys.readouterr().out
        assert "Current Configuration" in out
        assert "CLIFFVERIFY_WORKERS" in out

    def test_config_create_default(self, isolated):
        assert main(["config", "--create-default"]) == 0
        assert (isolated / "cliffverify_config.json").exists()
