"""Fourier-mode sweeps over surfaces of revolution."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import logging
import math
from typing import Sequence

import numpy as np

from spindirac.config import DISCRETE_MERGE_TOL, worker_count
from spindirac.discrete.eigensolve import Eigenpair, eig_smallest
from spindirac.discrete.operator import DiscreteDirac, assemble_revolution_dirac, mesh_spacing
from spindirac.discrete.surface import RevolutionSurface
from spindirac.spectra.models import SpinStructure
from spindirac.spectra.table import SpectrumTable, format_value

logger = logging.getLogger(__name__)

EIGEN_DUMP_COLUMNS = ("mode", "mesh_h", "index", "eigenvalue", "residual")


@dataclass(frozen=True)
class ModeSolution:
    mode: float
    mesh: float
    pairs: tuple[Eigenpair, ...]
    operator: DiscreteDirac


@dataclass(frozen=True)
class ConvergenceStudy:
    meshes: tuple[float, ...]
    errors: tuple[float, ...]
    order: float


def mode_labels(theta_spin: SpinStructure, m_max: float) -> list[float]:
    """Admissible modes |m| <= m_max: half-integers when bounding, integers otherwise."""
    if m_max < 0:
        raise ValueError(f"m_max must be nonnegative, got {m_max}")
    offset = 0.5 if SpinStructure(theta_spin) is SpinStructure.BOUNDING else 0.0
    top = math.floor(m_max - offset + 1e-12)
    positives = [offset + k for k in range(top + 1)] if top >= 0 else []
    modes = sorted({-m for m in positives} | set(positives))
    return [float(m) for m in modes]


def _solve_one(surface: RevolutionSurface, mode: float, n: int, k: int) -> ModeSolution:
    op = assemble_revolution_dirac(surface, mode, n)
    pairs = eig_smallest(op, min(k, op.dimension))
    return ModeSolution(mode=mode, mesh=op.mesh, pairs=tuple(pairs), operator=op)


def solve_modes(
    surface: RevolutionSurface,
    modes: Sequence[float],
    n: int,
    k: int,
    workers: int | None = None,
) -> list[ModeSolution]:
    """Solve each mode independently; results come back in the order of `modes`."""
    workers = workers or worker_count()
    if workers == 1 or len(modes) == 1:
        return [_solve_one(surface, m, n, k) for m in modes]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda m: _solve_one(surface, m, n, k), modes))


def surface_eigenvalues(
    surface: RevolutionSurface,
    m_max: float,
    n: int,
    k: int = 6,
) -> tuple[float, list[float]]:
    """Union of the k smallest-|lambda| eigenvalues of every mode; returns (mesh, values)."""
    solutions = solve_modes(surface, mode_labels(surface.theta_spin, m_max), n, k)
    if not solutions:
        raise ValueError(f"No admissible modes with |m| <= {m_max}")
    return solutions[0].mesh, _union_values(solutions)


def _union_values(solutions: Sequence[ModeSolution]) -> list[float]:
    return sorted(pair.value for solution in solutions for pair in solution.pairs)


def solutions_by_mesh(
    surface: RevolutionSurface,
    m_max: float,
    grids: Sequence[int],
    k: int = 6,
) -> dict[float, list[ModeSolution]]:
    """Per-mode eigenpairs on each grid, keyed by mesh spacing."""
    modes = mode_labels(surface.theta_spin, m_max)
    if not modes:
        raise ValueError(f"No admissible modes with |m| <= {m_max}")
    out: dict[float, list[ModeSolution]] = {}
    for n in grids:
        solutions = solve_modes(surface, modes, n, k)
        out[solutions[0].mesh] = solutions
    return out


def values_by_mesh(solutions: dict[float, list[ModeSolution]]) -> dict[float, list[float]]:
    return {mesh: _union_values(per_mode) for mesh, per_mode in solutions.items()}


def spectra_by_mesh(
    surface: RevolutionSurface,
    m_max: float,
    grids: Sequence[int],
    k: int = 6,
) -> dict[float, list[float]]:
    return values_by_mesh(solutions_by_mesh(surface, m_max, grids, k))


def solve_below(surface: RevolutionSurface, m_max: float, n: int, cutoff: float) -> list[ModeSolution]:
    """Per-mode eigenpairs, grown until each mode's computed spectrum passes cutoff."""
    if not cutoff > 0:
        raise ValueError(f"cutoff must be positive, got {cutoff}")
    solutions: list[ModeSolution] = []
    for mode in mode_labels(surface.theta_spin, m_max):
        op = assemble_revolution_dirac(surface, mode, n)
        k = 8
        while True:
            k = min(k, op.dimension)
            pairs = eig_smallest(op, k)
            if abs(pairs[-1].value) > cutoff or k == op.dimension:
                break
            k *= 2
        solutions.append(ModeSolution(mode=mode, mesh=op.mesh, pairs=tuple(pairs), operator=op))
    return solutions


def _values_below(solutions: Sequence[ModeSolution], cutoff: float) -> list[float]:
    return sorted(pair.value for solution in solutions for pair in solution.pairs if abs(pair.value) <= cutoff)


def surface_spectrum(
    surface: RevolutionSurface,
    m_max: float,
    n: int,
    cutoff: float,
    solutions: Sequence[ModeSolution] | None = None,
) -> SpectrumTable:
    """Discrete spectrum below cutoff, merged across modes within the discrete tolerance.

    Pass the output of solve_below as `solutions` to reuse an earlier solve.
    """
    if solutions is None:
        solutions = solve_below(surface, m_max, n, cutoff)
    return SpectrumTable.from_values(
        _values_below(solutions, cutoff),
        cutoff=cutoff,
        symmetric=False,
        description=f"discrete {surface.label} modes<={format_value(m_max)} n={n}",
        tol=DISCRETE_MERGE_TOL,
    )


def spectral_asymmetry(values: Sequence[float]) -> float:
    """Largest deviation of the sorted multiset from its own negation."""
    ordered = np.sort(np.asarray(values, dtype=float))
    if ordered.size == 0:
        return 0.0
    return float(np.max(np.abs(ordered + ordered[::-1])))


def mesh_convergence(
    surface: RevolutionSurface,
    m_max: float,
    grids: Sequence[int],
    exact_values: Sequence[float],
) -> ConvergenceStudy:
    """Fit err(h) ~ K h^p over the given grids, matching sorted eigenvalues."""
    if len(grids) < 2:
        raise ValueError("Convergence study needs at least two grids")
    target = np.sort(np.asarray(exact_values, dtype=float))
    cutoff = float(np.max(np.abs(target))) + 0.25
    meshes: list[float] = []
    errors: list[float] = []
    for n in grids:
        computed = np.asarray(_values_below(solve_below(surface, m_max, n, cutoff), cutoff), dtype=float)
        if computed.shape != target.shape:
            raise ValueError(
                f"Grid {n} produced {computed.shape[0]} eigenvalues below {cutoff:g}; expected {target.shape[0]}"
            )
        meshes.append(mesh_spacing(surface, n))
        errors.append(float(np.max(np.abs(computed - target))))
    order = float(np.polyfit(np.log(meshes), np.log(errors), 1)[0])
    logger.info("mesh convergence errors=%s order=%.3f", errors, order)
    return ConvergenceStudy(meshes=tuple(meshes), errors=tuple(errors), order=order)


def eigen_dump_rows(solutions: Sequence[ModeSolution]) -> list[tuple[str, ...]]:
    rows: list[tuple[str, ...]] = []
    for solution in solutions:
        for index, pair in enumerate(solution.pairs):
            rows.append(
                (
                    format_value(solution.mode),
                    format_value(solution.mesh),
                    str(index),
                    format_value(pair.value),
                    f"{pair.residual:.3e}",
                )
            )
    return rows

