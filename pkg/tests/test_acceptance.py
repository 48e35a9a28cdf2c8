"""Acceptance suite plumbing and the quick criteria."""

from __future__ import annotations

from pathlib import Path

import pytest

from spindirac import acceptance
from spindirac.acceptance import CriterionResult, SuiteContext, format_table, run_criteria, verify_all
from spindirac.catalog import load_catalog
from spindirac.discrete.kernel import ThresholdPolicy
from spindirac.output import read_embedded_config


def _context(tmp_path: Path, constant: float = 1.0) -> SuiteContext:
    return SuiteContext(
        policy=ThresholdPolicy(constant=constant),
        catalog=load_catalog(),
        artifacts=tmp_path,
        seed=0,
    )


def test_format_table() -> None:
    table = format_table(
        [
            CriterionResult(name="index_bound_table", passed=True, detail="224 cases", seconds=0.04),
            CriterionResult(name="sphere", passed=False, detail="order 1.2", seconds=12.0),
        ]
    )

    lines = table.splitlines()
    assert lines[0].startswith("criterion")
    assert "PASS" in lines[1] and "224 cases" in lines[1]
    assert lines[2].startswith("sphere ")
    assert "FAIL" in lines[2]


def test_index_table_criterion(tmp_path: Path) -> None:
    ctx = _context(tmp_path)

    passed, detail = acceptance._index_table(ctx)

    assert passed
    assert detail == "224 cases, 0 mismatches"
    assert read_embedded_config((tmp_path / "index_table.csv").read_text(encoding="utf-8"))["artifact"] == (
        "index_table.csv"
    )


def test_product_bound_criterion(tmp_path: Path) -> None:
    passed, _ = acceptance._product_bound(_context(tmp_path))

    assert passed
    assert (tmp_path / "product_bound.csv").exists()


def test_product_decay_criterion(tmp_path: Path) -> None:
    passed, detail = acceptance._product_decay(_context(tmp_path))

    assert passed
    assert detail.startswith("max |G|/r = ")


def test_torus_criterion_passes_with_calibrated_threshold(tmp_path: Path) -> None:
    passed, detail = acceptance._torus_kernel(_context(tmp_path))

    assert passed, detail
    assert "exact=2 discrete=2" in detail
    assert "C in [" in detail
    header = (tmp_path / "torus_kernel.csv").read_text(encoding="utf-8").splitlines()[1]
    assert header.endswith("window_low,window_high")


def test_torus_criterion_fails_with_tampered_threshold(tmp_path: Path) -> None:
    passed, detail = acceptance._torus_kernel(_context(tmp_path, constant=1e4))

    assert not passed
    assert "discrete=2" not in detail


def test_determinism_criterion(tmp_path: Path) -> None:
    passed, detail = acceptance._determinism(_context(tmp_path))

    assert passed
    assert detail == "byte-identical"
    rows = (tmp_path / "determinism.csv").read_text(encoding="utf-8").splitlines()[2:]
    commands = {row.split(",")[1] for row in rows}
    assert commands == {
        "spectrum",
        "kernel",
        "bound-check",
        "conformal-test",
        "neck-sweep",
        "energy-ratio",
        "list-fixtures",
    }
    assert all(row.endswith(",true") for row in rows)


def test_run_criteria_turns_errors_into_failures(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    def broken(ctx: SuiteContext) -> tuple[bool, str]:
        raise ValueError("boom")

    monkeypatch.setattr(acceptance, "CRITERIA", (("broken", broken),))

    results = run_criteria(_context(tmp_path))

    assert [(r.name, r.passed, r.detail) for r in results] == [("broken", False, "ValueError: boom")]


def test_verify_all_writes_summary(tmp_path: Path, monkeypatch: pytest.MonkeyPatch, capsys) -> None:
    monkeypatch.setattr(acceptance, "CRITERIA", (("index_bound_table", acceptance._index_table),))

    exit_code = verify_all(artifacts_dir=tmp_path)

    assert exit_code == 0
    summary = (tmp_path / "summary.csv").read_text(encoding="utf-8")
    assert "index_bound_table,pass," in summary
    assert "PASS" in capsys.readouterr().out


def test_verify_all_reports_failures(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(acceptance, "CRITERIA", (("never", lambda ctx: (False, "no")),))

    assert verify_all(artifacts_dir=tmp_path) == 1


def test_verify_all_rejects_missing_catalog(tmp_path: Path, capsys) -> None:
    assert verify_all(fixtures_path=tmp_path / "absent.json") == 2
    assert "input error" in capsys.readouterr().err


def test_verify_all_rejects_nonpositive_threshold(capsys) -> None:
    assert verify_all(threshold_constant=0.0) == 2
    assert "Threshold constant" in capsys.readouterr().err
