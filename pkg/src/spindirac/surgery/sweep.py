"""Kernel dimension of the surgered sphere along a shrinking-rho sweep."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
import io
import logging
import math
from typing import Any, Sequence

import numpy as np

from spindirac.config import (
    NECK_CORE_LENGTH,
    NECK_GRID,
    NECK_MODES,
    NECK_R0,
    NECK_R1,
    NECK_R_MAX,
    SPHERE_RADIUS,
)
from spindirac.discrete.kernel import KernelVerdict, ThresholdPolicy, kernel_dim_estimate
from spindirac.discrete.modes import (
    EIGEN_DUMP_COLUMNS,
    ModeSolution,
    eigen_dump_rows,
    solutions_by_mesh,
    values_by_mesh,
)
from spindirac.errors import EigenSolverError
from spindirac.index_bound import Minimality, TopologicalData, as_lower_bound, is_d_minimal, surgery_bound_transfer
from spindirac.spectra.models import SpinStructure
from spindirac.spectra.table import format_value
from spindirac.surgery.model import assemble_surgery_model
from spindirac.surgery.profile import build_neck_profile

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ("rho", "neck_length", "min_abs_eig", "kernel_count", "gap_ratio", "pass")
SWEEP_DUMP_COLUMNS = ("rho",) + EIGEN_DUMP_COLUMNS

ROUND_SPHERE = TopologicalData(n=2, label="round S^2")


@dataclass(frozen=True)
class SweepRow:
    rho: float
    neck_length: float
    min_abs_eig: float
    kernel_count: int
    gap_ratio: float
    verdict: KernelVerdict
    passed: bool
    minimality: Minimality = Minimality.MINIMAL
    solutions: tuple[ModeSolution, ...] = field(default=(), repr=False, compare=False)


@dataclass(frozen=True)
class SweepReport:
    rows: tuple[SweepRow, ...]
    baseline_kernel: int
    t_spin: SpinStructure
    parameters: dict[str, float] = field(default_factory=dict)
    complete: bool = True
    error: str | None = None
    topology: TopologicalData = surgery_bound_transfer(ROUND_SPHERE)

    @property
    def lower_bound(self) -> int:
        return as_lower_bound(self.topology)

    @property
    def passed(self) -> bool:
        return self.complete and all(row.passed for row in self.rows)

    @property
    def confident(self) -> bool:
        """Every row's kernel count came with a confident verdict."""
        return all(row.verdict is KernelVerdict.CONFIDENT for row in self.rows)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        for row in self.rows:
            writer.writerow(
                (
                    format_value(row.rho),
                    format_value(row.neck_length),
                    format_value(row.min_abs_eig),
                    row.kernel_count,
                    format_value(row.gap_ratio),
                    "true" if row.passed else "false",
                )
            )
        return buffer.getvalue()

    def eigen_dump_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(SWEEP_DUMP_COLUMNS)
        for row in self.rows:
            for dump_row in eigen_dump_rows(row.solutions):
                writer.writerow((format_value(row.rho),) + dump_row)
        return buffer.getvalue()

    def to_document(self) -> dict[str, Any]:
        return {
            "baseline_kernel": self.baseline_kernel,
            "t_spin": self.t_spin.value,
            "topology": self.topology.label,
            "lower_bound": self.lower_bound,
            "profile": dict(self.parameters),
            "complete": self.complete,
            "passed": self.passed,
            "confident": self.confident,
            "error": self.error,
            "rows": [
                {
                    "rho": row.rho,
                    "neck_length": row.neck_length,
                    "min_abs_eig": row.min_abs_eig,
                    "kernel_count": row.kernel_count,
                    "gap_ratio": None if math.isinf(row.gap_ratio) else row.gap_ratio,
                    "verdict": row.verdict.value,
                    "minimality": row.minimality.value,
                    "pass": row.passed,
                }
                for row in self.rows
            ],
        }


def neck_sweep(
    rho_list: Sequence[float],
    m_max: float = NECK_MODES,
    n: int = NECK_GRID,
    baseline_kernel: int = 0,
    *,
    R_max: float = NECK_R_MAX,
    r_0: float = NECK_R0,
    r_1: float = NECK_R1,
    sphere_radius: float = SPHERE_RADIUS,
    core_length: float = NECK_CORE_LENGTH,
    t_spin: SpinStructure = SpinStructure.BOUNDING,
    policy: ThresholdPolicy | None = None,
    eigenpairs_per_mode: int = 6,
    topology: TopologicalData = ROUND_SPHERE,
) -> SweepReport:
    """Solve the surgered sphere at each rho on grids n/2 and n and compare with the baseline.

    `topology` describes the manifold before surgery. Its invariants carry
    over to the surgered one, so every row must also stay at or above that
    lower bound; a count below it marks the row inconsistent.

    An eigensolver failure stops the sweep and returns the rows so far,
    flagged incomplete.
    """
    rhos = [float(rho) for rho in rho_list]
    if not rhos:
        raise ValueError("rho_list must not be empty")
    if any(later >= earlier for earlier, later in zip(rhos, rhos[1:])):
        raise ValueError(f"rho_list must be strictly decreasing, got {rhos}")
    if baseline_kernel < 0:
        raise ValueError(f"baseline_kernel must be nonnegative, got {baseline_kernel}")
    surgered = surgery_bound_transfer(topology)
    lower_bound = as_lower_bound(surgered)
    if baseline_kernel < lower_bound:
        raise ValueError(f"baseline_kernel {baseline_kernel} is below the topological lower bound {lower_bound}")
    # validate every point before spending time on any solve
    profiles = [build_neck_profile(R_max, r_0, r_1, rho) for rho in rhos]
    t_spin = SpinStructure(t_spin)
    parameters = {
        "R_max": R_max,
        "r_0": r_0,
        "r_1": r_1,
        "sphere_radius": sphere_radius,
        "core_length": core_length,
        "m_max": m_max,
        "grid": n,
    }

    rows: list[SweepRow] = []
    for profile in profiles:
        model = assemble_surgery_model(profile, sphere_radius, core_length, t_spin)
        try:
            solutions = solutions_by_mesh(model.surface, m_max, [n // 2, n], eigenpairs_per_mode)
        except EigenSolverError as exc:
            logger.error("sweep aborted at rho=%g: %s", profile.rho, exc)
            return SweepReport(
                rows=tuple(rows),
                baseline_kernel=baseline_kernel,
                t_spin=t_spin,
                parameters=parameters,
                complete=False,
                error=f"rho={profile.rho:g}: {exc}",
                topology=surgered,
            )
        spectra = values_by_mesh(solutions)
        estimate = kernel_dim_estimate(spectra, policy)
        minimality = is_d_minimal(estimate.count, surgered)
        finest = min(spectra)
        row = SweepRow(
            rho=profile.rho,
            neck_length=model.neck_length,
            min_abs_eig=float(np.min(np.abs(spectra[finest]))),
            kernel_count=estimate.count,
            gap_ratio=estimate.gap_ratio,
            verdict=estimate.verdict,
            passed=estimate.count <= baseline_kernel and minimality is not Minimality.INCONSISTENT,
            minimality=minimality,
            solutions=tuple(solution for mesh in sorted(solutions) for solution in solutions[mesh]),
        )
        logger.info(
            "rho=%g neck_length=%.4f min|lambda|=%.6f kernel=%d gap=%.1f %s",
            row.rho,
            row.neck_length,
            row.min_abs_eig,
            row.kernel_count,
            row.gap_ratio,
            row.minimality.value,
        )
        rows.append(row)
    return SweepReport(
        rows=tuple(rows),
        baseline_kernel=baseline_kernel,
        t_spin=t_spin,
        parameters=parameters,
        topology=surgered,
    )
