"""Kernel sweeps along a shrinking neck."""

from __future__ import annotations

import numpy as np
import pytest

from spindirac.discrete.eigensolve import Eigenpair
from spindirac.discrete.kernel import KernelVerdict
from spindirac.discrete.modes import ModeSolution
from spindirac.errors import EigenSolverError, HierarchyError
from spindirac.index_bound import Minimality, TopologicalData
from spindirac.schemas.validate import validate_sweep_report
from spindirac.spectra.models import SpinStructure
from spindirac.surgery import sweep
from spindirac.surgery.sweep import SWEEP_COLUMNS, SWEEP_DUMP_COLUMNS, neck_sweep


def _solutions(values: dict[float, list[float]]) -> dict[float, list[ModeSolution]]:
    return {
        mesh: [
            ModeSolution(
                mode=0.5,
                mesh=mesh,
                pairs=tuple(Eigenpair(value, np.zeros(2), 1e-12) for value in per_mesh),
                operator=None,
            )
        ]
        for mesh, per_mesh in values.items()
    }


def test_small_sweep_keeps_trivial_kernel() -> None:
    report = neck_sweep([0.2, 0.1], m_max=1.5, n=128)

    assert report.complete
    assert report.passed
    assert [row.rho for row in report.rows] == [0.2, 0.1]
    assert all(row.kernel_count == 0 for row in report.rows)
    assert all(row.minimality is Minimality.MINIMAL for row in report.rows)
    assert report.rows[0].neck_length < report.rows[1].neck_length
    assert report.t_spin is SpinStructure.BOUNDING
    assert report.lower_bound == 0
    assert report.topology.label.endswith("[after surgery of codimension >= 2]")


def test_sweep_csv_and_document() -> None:
    report = neck_sweep([0.2], m_max=0.5, n=64, t_spin=SpinStructure.NON_BOUNDING)

    lines = report.to_csv().splitlines()
    document = report.to_document()

    assert lines[0] == ",".join(SWEEP_COLUMNS)
    assert len(lines) == 2
    assert document["t_spin"] == "non_bounding"
    assert document["profile"]["grid"] == 64
    assert document["lower_bound"] == 0
    assert document["rows"][0]["minimality"] == report.rows[0].minimality.value
    assert document["confident"] is report.confident
    validate_sweep_report(document)


def test_sweep_eigen_dump_lists_every_pair() -> None:
    report = neck_sweep([0.2], m_max=0.5, n=64, eigenpairs_per_mode=3)

    lines = report.eigen_dump_csv().splitlines()

    assert lines[0] == ",".join(SWEEP_DUMP_COLUMNS)
    # two modes on two grids, three pairs each
    assert len(lines) == 1 + 2 * 2 * 3
    assert all(line.startswith("0.2,") for line in lines[1:])


def test_rho_list_must_decrease() -> None:
    with pytest.raises(ValueError, match="strictly decreasing"):
        neck_sweep([0.1, 0.2])
    with pytest.raises(ValueError, match="must not be empty"):
        neck_sweep([])


def test_hierarchy_checked_before_any_solve(monkeypatch: pytest.MonkeyPatch) -> None:
    def forbidden(*args, **kwargs):
        raise AssertionError("solver must not run")

    monkeypatch.setattr(sweep, "solutions_by_mesh", forbidden)
    monkeypatch.setattr(sweep, "assemble_surgery_model", forbidden)

    with pytest.raises(HierarchyError, match="rho < r_0/4"):
        neck_sweep([0.3, 0.1])


def test_baseline_below_transferred_bound_is_rejected(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(sweep, "solutions_by_mesh", lambda *args: pytest.fail("solver must not run"))
    spin_surface = TopologicalData(n=2, alpha_nonzero=True, label="alpha != 0")

    with pytest.raises(ValueError, match="below the topological lower bound 2"):
        neck_sweep([0.2], n=64, baseline_kernel=1, topology=spin_surface)


def test_count_below_transferred_bound_is_inconsistent(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(sweep, "solutions_by_mesh", lambda *args: _solutions({0.02: [0.5, -0.5], 0.04: [0.5, -0.5]}))
    spin_surface = TopologicalData(n=2, alpha_nonzero=True, label="alpha != 0")

    report = neck_sweep([0.2], n=64, baseline_kernel=2, topology=spin_surface)

    assert report.lower_bound == 2
    assert report.rows[0].kernel_count == 0
    assert report.rows[0].minimality is Minimality.INCONSISTENT
    assert not report.rows[0].passed
    assert not report.passed


def test_solver_failure_returns_partial_report(monkeypatch: pytest.MonkeyPatch) -> None:
    calls = []

    def fake_solutions(surface, m_max, grids, k):
        calls.append(grids)
        if len(calls) > 1:
            raise EigenSolverError("no convergence")
        return _solutions({0.02: [0.5, -0.5], 0.04: [0.5, -0.5]})

    monkeypatch.setattr(sweep, "solutions_by_mesh", fake_solutions)

    report = neck_sweep([0.2, 0.1, 0.05], n=64)

    assert not report.complete
    assert not report.passed
    assert len(report.rows) == 1
    assert report.rows[0].verdict is KernelVerdict.CONFIDENT
    assert report.rows[0].min_abs_eig == pytest.approx(0.5)
    assert report.error.startswith("rho=0.1:")
    assert calls == [[32, 64], [32, 64]]
    validate_sweep_report(report.to_document())


def test_row_fails_above_baseline(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(sweep, "solutions_by_mesh", lambda *args: _solutions({0.02: [0.0, 0.5], 0.04: [0.0, 0.5]}))

    report = neck_sweep([0.2], n=64)

    assert report.rows[0].kernel_count == 1
    assert report.rows[0].minimality is Minimality.NON_MINIMAL
    assert not report.rows[0].passed
    assert not report.passed
    assert neck_sweep([0.2], n=64, baseline_kernel=1).passed


def test_unconfident_rows_reported_apart_from_pass(monkeypatch: pytest.MonkeyPatch) -> None:
    # the two grids disagree on the count, so the verdict is unstable
    monkeypatch.setattr(sweep, "solutions_by_mesh", lambda *args: _solutions({0.02: [0.5, -0.5], 0.04: [0.0, 0.5]}))

    report = neck_sweep([0.2], n=64, baseline_kernel=1)

    assert report.rows[0].verdict is not KernelVerdict.CONFIDENT
    assert report.passed
    assert not report.confident
    assert report.to_document()["confident"] is False
