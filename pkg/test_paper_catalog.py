#!/usr/bin/env python3
"""
Tests for the golden-table catalog, golden-file parsing and the
theorem-level checks.
"""

import hashlib
import json
import shutil
from pathlib import Path

import pytest

from src.algebra_core import ExactMatrix
from src.clifford_systems import multiplication_by_i
from src.exterior_forms import omega
from src.paper_catalog import (
    GOLDEN_TABLES,
    HASHES_FILE,
    GoldenFormatError,
    convention_fingerprint,
    derivation_sweep,
    freeze_phi,
    load_golden,
    matrix_lines,
    read_hashes,
    verify_form_engine,
    verify_phi_spin9,
    verify_phi_spin10,
    verify_restriction_identity,
    verify_table,
    verify_tables,
    verify_theorem_tau,
    write_golden_tables,
)
from src.spin_algebras import build_P_basis

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture
def golden_copy(tmp_path):
    target = tmp_path / "golden"
    shutil.copytree(GOLDEN_DIR, target)
    return target


class TestCatalog:
    """Table list, record format and fingerprint."""

    def test_table_order(self):
        assert list(GOLDEN_TABLES) == [
            "top", "eqJ1", "eqJ2", "eqJ3", "eq28", "eq8",
            "top32", "eqP1", "eqP2", "eqP3", "complex28", "complex8", "complex9",
        ]

    def test_matrix_line_format(self):
        lines = list(matrix_lines(ExactMatrix.from_dense([[0, 1], [0, 0]]), "N"))
        assert lines == ['{"matrix": "N", "dim": 2, "realm": "other", "row": 0, "col": 1, "re": "1", "im": "0"}']

    def test_fingerprint_is_stable(self):
        first = convention_fingerprint()
        assert first == convention_fingerprint()
        assert len(first) == 64

    def test_table_sizes(self):
        objects = GOLDEN_TABLES["eqJ2"].build()
        assert len(objects) == 21
        assert objects[0][0] == "J23"
        assert [name for name, _ in GOLDEN_TABLES["complex9"].build()][-1] == "2psi09"


class TestGoldenFiles:
    """Committed tables, regeneration and parse errors."""

    def test_committed_tables_match(self):
        reports = verify_tables(GOLDEN_DIR)
        assert len(reports) == 13
        for report in reports:
            assert report.passed, (report.name, report.witness)

    def test_regeneration_is_byte_identical(self, tmp_path):
        written = write_golden_tables(tmp_path)
        assert set(written) == set(GOLDEN_TABLES)
        for name in GOLDEN_TABLES:
            regenerated = (tmp_path / f"{name}.jsonl").read_text(encoding="utf-8")
            assert regenerated == (GOLDEN_DIR / f"{name}.jsonl").read_text(encoding="utf-8")
            assert regenerated.endswith("\n")

    def test_altered_line_is_reported(self, golden_copy):
        path = golden_copy / "top.jsonl"
        lines = path.read_text(encoding="utf-8").splitlines()
        lines[0] = lines[0].replace('"re": "1"', '"re": "-1"')
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        report = verify_table(GOLDEN_TABLES["top"], golden_copy)
        assert not report.passed
        assert report.witness.startswith("byte-identical: line 1")
        assert any(c.name == "parsed-equal" and not c.passed for c in report.checks)

    def test_extra_entry_is_reported(self, golden_copy):
        path = golden_copy / "eqJ1.jsonl"
        with open(path, "a", encoding="utf-8") as f:
            f.write(json.dumps({"matrix": "J99", "dim": 16, "realm": "real-16",
                                "row": 0, "col": 1, "re": "1", "im": "0"}) + "\n")
        report = verify_table(GOLDEN_TABLES["eqJ1"], golden_copy)
        assert any(c.name == "no-extra-entries" and not c.passed for c in report.checks)

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"form": "x", "blade": [0, 1], "re": "1", "im": "0"}\n{not json\n', encoding="utf-8")
        with pytest.raises(GoldenFormatError) as info:
            load_golden(path)
        assert info.value.line_number == 2

    def test_missing_scalar_part(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"form": "x", "blade": [0, 1], "re": "1"}\n', encoding="utf-8")
        with pytest.raises(GoldenFormatError):
            load_golden(path)

    def test_bad_scalar(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"form": "x", "blade": [0, 1], "re": "1/0", "im": "0"}\n', encoding="utf-8")
        with pytest.raises(GoldenFormatError):
            load_golden(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_golden(tmp_path / "absent.jsonl")

    def test_unknown_table(self):
        with pytest.raises(ValueError):
            verify_tables(GOLDEN_DIR, names=["eq99"])

    def test_hashes(self, tmp_path):
        assert read_hashes(tmp_path) == {}
        (tmp_path / HASHES_FILE).write_text("[1, 2", encoding="utf-8")
        with pytest.raises(GoldenFormatError):
            read_hashes(tmp_path)


class TestTheoremChecks:
    """Identity reports for τ2, τ4 and the Φ forms."""

    def test_theorem_tau(self):
        report = verify_theorem_tau()
        assert report.passed, report.witness
        assert report.name == "theorem-tau"
        passed = {c.name for c in report.checks if c.passed}
        assert "tau2(psiD) annihilated by 45 J^D and 𝔍" in passed
        assert "(nu2 - psi09^2)|V' = 0" in passed

    def test_derivation_sweep(self):
        mats = [multiplication_by_i(32), build_P_basis().get(0, 1)]
        assert derivation_sweep(omega(), mats) == [1]

    def test_phi_spin9_without_frozen_golden(self, tmp_path, caplog):
        report = verify_phi_spin9(golden_dir=tmp_path)
        assert report.passed, report.witness
        assert report.status == "pass"
        assert any("phi9" in item for item in report.skipped)
        assert "not frozen" in caplog.text
        assert report.metrics["content"] % 360 == 0

    def test_committed_phi_hashes(self):
        hashes = read_hashes(GOLDEN_DIR)
        assert set(hashes) == {"phi9", "phi10"}
        assert hashlib.sha256((GOLDEN_DIR / "phi9.jsonl").read_bytes()).hexdigest() == hashes["phi9"]

    def test_phi_spin9_matches_committed_golden(self):
        report = verify_phi_spin9(golden_dir=GOLDEN_DIR)
        assert report.passed, report.witness
        assert not report.skipped
        passed = {c.name for c in report.checks if c.passed}
        assert {"phi9-matches-golden", "phi9-hash"} <= passed
        assert report.metrics["phi9_terms"] == 702

    def test_phi_frozen_by_digest_only(self, tmp_path):
        shutil.copy(GOLDEN_DIR / HASHES_FILE, tmp_path / HASHES_FILE)
        report = verify_phi_spin9(golden_dir=tmp_path)
        assert report.passed, report.witness
        assert not report.skipped
        names = [c.name for c in report.checks]
        assert "phi9-hash" in names
        assert "phi9-matches-golden" not in names

    @pytest.mark.slow
    def test_form_engine(self):
        report = verify_form_engine()
        assert report.passed, report.witness

    @pytest.mark.slow
    def test_restriction_identity(self):
        report = verify_restriction_identity(workers=2)
        assert report.passed, report.witness

    @pytest.mark.slow
    def test_phi_spin10(self):
        report = verify_phi_spin10(workers=2)
        assert report.passed, report.witness
        assert report.metrics["rank_with_omega4"] == 2

    @pytest.mark.slow
    def test_phi_spin10_matches_committed_hash(self):
        report = verify_phi_spin10(golden_dir=GOLDEN_DIR, workers=2)
        assert report.passed, report.witness
        assert not report.skipped
        assert any(c.name == "phi10-hash" and c.passed for c in report.checks)

    @pytest.mark.slow
    def test_freeze_then_compare(self, tmp_path):
        hashes = freeze_phi(tmp_path, workers=2)
        assert set(hashes) == {"phi9", "phi10"}
        assert read_hashes(tmp_path) == hashes
        report = verify_phi_spin9(golden_dir=tmp_path)
        assert not report.skipped
        assert any(c.name == "phi9-matches-golden" and c.passed for c in report.checks)
        assert any(c.name == "phi9-hash" and c.passed for c in report.checks)
