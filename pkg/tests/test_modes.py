"""Fourier-mode sweeps on the round sphere."""

from __future__ import annotations

import pytest

from spindirac.discrete.modes import (
    EIGEN_DUMP_COLUMNS,
    eigen_dump_rows,
    mesh_convergence,
    mode_labels,
    solutions_by_mesh,
    solve_below,
    solve_modes,
    spectra_by_mesh,
    spectral_asymmetry,
    surface_eigenvalues,
    surface_spectrum,
    values_by_mesh,
)
from spindirac.discrete.surface import round_sphere_surface
from spindirac.spectra.exact import sphere_spectrum
from spindirac.spectra.models import SpinStructure


def test_mode_labels() -> None:
    assert mode_labels(SpinStructure.BOUNDING, 2.5) == [-2.5, -1.5, -0.5, 0.5, 1.5, 2.5]
    assert mode_labels(SpinStructure.NON_BOUNDING, 2) == [-2.0, -1.0, 0.0, 1.0, 2.0]
    assert mode_labels(SpinStructure.BOUNDING, 0.2) == []
    with pytest.raises(ValueError, match="m_max"):
        mode_labels(SpinStructure.BOUNDING, -1.0)


def _weight_near(table, target: float, tol: float = 0.05) -> int:
    return sum(mult for value, mult in table.entries if abs(value - target) <= tol)


def test_sphere_spectrum_below_cutoff() -> None:
    table = surface_spectrum(round_sphere_surface(), 2.5, 128, 2.5)

    assert table.count() == 12
    assert _weight_near(table, 1.0) == 2
    assert _weight_near(table, -1.0) == 2
    assert _weight_near(table, 2.0) == 4
    assert _weight_near(table, -2.0) == 4


def test_sphere_mode_union_is_mirror_symmetric() -> None:
    _, values = surface_eigenvalues(round_sphere_surface(), 1.5, 64, k=4)

    assert len(values) == 16
    assert spectral_asymmetry(values) <= 1e-8


def test_spectral_asymmetry_detects_shift() -> None:
    assert spectral_asymmetry([]) == 0.0
    assert spectral_asymmetry([-1.0, 1.0]) == 0.0
    assert spectral_asymmetry([-1.0, 1.5]) == pytest.approx(0.5)


def test_sphere_mesh_convergence_is_second_order() -> None:
    exact = sphere_spectrum(2, 2.5).values()

    study = mesh_convergence(round_sphere_surface(), 2.5, (64, 128, 256), exact)

    assert study.errors[0] > study.errors[1] > study.errors[2]
    assert study.order >= 1.8


def test_mesh_convergence_needs_two_grids() -> None:
    with pytest.raises(ValueError, match="at least two grids"):
        mesh_convergence(round_sphere_surface(), 2.5, (64,), [1.0])


def test_spectra_by_mesh_keys_are_mesh_spacings() -> None:
    spectra = spectra_by_mesh(round_sphere_surface(), 0.5, (32, 64), k=2)

    meshes = sorted(spectra)
    assert len(meshes) == 2
    assert meshes[1] / meshes[0] == pytest.approx(2.0, rel=0.02)
    assert all(len(values) == 4 for values in spectra.values())


def test_parallel_solve_matches_serial(monkeypatch: pytest.MonkeyPatch) -> None:
    sphere = round_sphere_surface()
    modes = mode_labels(SpinStructure.BOUNDING, 1.5)

    serial = solve_modes(sphere, modes, 64, 3, workers=1)
    monkeypatch.setenv("SPINDIRAC_THREADS", "3")
    parallel = solve_modes(sphere, modes, 64, 3)

    assert [s.mode for s in parallel] == modes
    for left, right in zip(serial, parallel):
        assert [p.value for p in left.pairs] == [p.value for p in right.pairs]


def test_invalid_thread_setting(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("SPINDIRAC_THREADS", "zero")

    with pytest.raises(ValueError, match="SPINDIRAC_THREADS must be a positive integer"):
        solve_modes(round_sphere_surface(), [0.5, -0.5], 32, 2)


def test_eigen_dump_rows() -> None:
    solutions = solve_modes(round_sphere_surface(), [0.5], 32, 2, workers=1)

    rows = eigen_dump_rows(solutions)

    assert len(EIGEN_DUMP_COLUMNS) == 5
    assert [row[2] for row in rows] == ["0", "1"]
    assert all(row[0] == "0.5" for row in rows)


def test_solutions_by_mesh_keep_pairs_next_to_values() -> None:
    solutions = solutions_by_mesh(round_sphere_surface(), 0.5, (32, 64), k=2)

    assert values_by_mesh(solutions) == spectra_by_mesh(round_sphere_surface(), 0.5, (32, 64), k=2)
    assert all([s.mode for s in per_mesh] == [-0.5, 0.5] for per_mesh in solutions.values())
    with pytest.raises(ValueError, match="No admissible modes"):
        solutions_by_mesh(round_sphere_surface(), 0.2, (32, 64))


def test_solve_below_reaches_the_cutoff() -> None:
    sphere = round_sphere_surface()

    solutions = solve_below(sphere, 1.5, 128, 2.5)

    for solution in solutions:
        assert abs(solution.pairs[-1].value) > 2.5
    table = surface_spectrum(sphere, 1.5, 128, 2.5, solutions=solutions)
    assert table == surface_spectrum(sphere, 1.5, 128, 2.5)
    with pytest.raises(ValueError, match="cutoff must be positive"):
        solve_below(sphere, 1.5, 128, 0.0)
