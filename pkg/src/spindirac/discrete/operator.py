"""Staggered-grid Dirac matrices for circles and Fourier modes of surfaces.

Both spinor components live on interleaved grids: component b on the nodes,
component a on the half nodes. A single-grid centered difference would carry a
spurious doubler mode that corrupts kernel counts; the staggered pairing has
none.
"""

from __future__ import annotations

from dataclasses import dataclass
import logging
import math
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
import scipy.sparse as sp
from scipy.sparse.linalg import norm as sparse_norm

from spindirac.config import HERMITICITY_TOL
from spindirac.discrete.surface import RevolutionSurface, Topology
from spindirac.spectra.models import SpinCircle, SpinStructure

logger = logging.getLogger(__name__)

ConformalFactor = Callable[[np.ndarray], np.ndarray]

MIN_GRID = 16
MIN_DIMENSION = 8
_GAUSS_POINTS = 8


@dataclass(frozen=True)
class StaggeredGrid:
    """Positions and vector slots of the two spinor components."""

    a_points: np.ndarray
    a_index: np.ndarray
    b_points: np.ndarray
    b_index: np.ndarray
    period: float | None

    def split(self, vector: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        vec = np.asarray(vector)
        return vec[self.a_index], vec[self.b_index]

    def swapped(self) -> "StaggeredGrid":
        return StaggeredGrid(self.b_points, self.b_index, self.a_points, self.a_index, self.period)


@dataclass(frozen=True)
class DiscreteDirac:
    """Real symmetric matrix of a discretized Dirac operator.

    copies counts how often each spinor eigenvalue repeats in the matrix
    spectrum. chiral operators are block off-diagonal, so their spectrum is
    exactly mirror-symmetric.
    """

    matrix: sp.csr_matrix
    mesh: float
    mode: float | None = None
    copies: int = 1
    chiral: bool = True
    grid: StaggeredGrid | None = None
    label: str = ""

    def __post_init__(self) -> None:
        matrix = sp.csr_matrix(self.matrix, dtype=float)
        if matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"Operator matrix must be square, got {matrix.shape}")
        if matrix.shape[0] < MIN_DIMENSION:
            raise ValueError(f"Operator dimension must be >= {MIN_DIMENSION}, got {matrix.shape[0]}")
        if not self.mesh > 0:
            raise ValueError(f"Mesh spacing must be positive, got {self.mesh}")
        if self.copies < 1:
            raise ValueError(f"copies must be >= 1, got {self.copies}")
        residual = hermiticity_residual(matrix)
        if residual > HERMITICITY_TOL:
            raise ValueError(f"Operator is not symmetric (relative residual {residual:.3e})")
        object.__setattr__(self, "matrix", matrix)

    @property
    def dimension(self) -> int:
        return int(self.matrix.shape[0])

    def is_tridiagonal(self) -> bool:
        coo = self.matrix.tocoo()
        return bool(np.all(np.abs(coo.row - coo.col) <= 1))


def hermiticity_residual(matrix: sp.spmatrix) -> float:
    scale = sparse_norm(matrix)
    if scale == 0.0:
        return 0.0
    return float(sparse_norm(matrix - matrix.T) / scale)


def _chiral_matrix(
    block: sp.spmatrix,
    a_index: np.ndarray,
    b_index: np.ndarray,
    dimension: int,
) -> sp.csr_matrix:
    """Symmetric matrix [[0, K], [K^T, 0]] with rows of K on a-slots, columns on b-slots."""
    coo = sp.coo_matrix(block)
    rows = a_index[coo.row]
    cols = b_index[coo.col]
    data = coo.data
    full = sp.coo_matrix(
        (np.concatenate([data, data]), (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
        shape=(dimension, dimension),
    )
    return full.tocsr()


def _periodic_grid(length: float, n: int) -> StaggeredGrid:
    h = length / n
    nodes = h * np.arange(n)
    return StaggeredGrid(
        a_points=nodes + 0.5 * h,
        a_index=2 * np.arange(n) + 1,
        b_points=nodes,
        b_index=2 * np.arange(n),
        period=length,
    )


def assemble_circle_dirac(c: SpinCircle, conf: ConformalFactor, n: int) -> DiscreteDirac:
    """Discretize -i d/ds for the metric F(theta)^2 (L / 2 pi)^2 dtheta^2.

    The operator is conjugated by F^{1/2} to F^{-1/2} d/dx F^{-1/2} and realified,
    so every eigenvalue occurs twice. The bounding structure flips the sign of
    the coupling across the seam.
    """
    if n < MIN_GRID:
        raise ValueError(f"Circle grid size must be >= {MIN_GRID}, got {n}")
    grid = _periodic_grid(c.length, n)
    h = c.length / n
    angle = 2.0 * math.pi / c.length
    f_nodes = np.asarray(conf(angle * grid.b_points), dtype=float)
    f_half = np.asarray(conf(angle * grid.a_points), dtype=float)
    if f_nodes.shape != (n,) or f_half.shape != (n,):
        raise ValueError("Conformal factor must evaluate elementwise on arrays")
    if np.any(~np.isfinite(f_nodes)) or np.any(f_nodes <= 0) or np.any(f_half <= 0):
        raise ValueError("Conformal factor must be positive at every grid point")

    seam = -1.0 if c.structure is SpinStructure.BOUNDING else 1.0
    rows = np.arange(n)
    forward = (rows + 1) % n
    forward_sign = np.ones(n)
    forward_sign[-1] = seam
    left = 1.0 / np.sqrt(f_half)
    data = np.concatenate(
        [
            forward_sign * left / (h * np.sqrt(f_nodes[forward])),
            -left / (h * np.sqrt(f_nodes)),
        ]
    )
    block = sp.coo_matrix((data, (np.concatenate([rows, rows]), np.concatenate([forward, rows]))), shape=(n, n))
    matrix = _chiral_matrix(block, grid.a_index, grid.b_index, 2 * n)
    logger.debug("assembled circle operator n=%d structure=%s", n, c.structure.value)
    return DiscreteDirac(
        matrix=matrix,
        mesh=h,
        copies=2,
        grid=grid,
        label=f"circle length={c.length:g} structure={c.structure.value}",
    )


def _half_cell_integrals(profile: Callable[[np.ndarray], np.ndarray], edges: np.ndarray) -> np.ndarray:
    """Gauss-Legendre integrals of 1/phi over consecutive edge intervals."""
    nodes, weights = leggauss(_GAUSS_POINTS)
    lower = edges[:-1, None]
    upper = edges[1:, None]
    half = 0.5 * (upper - lower)
    points = 0.5 * (upper + lower) + half * nodes[None, :]
    values = np.asarray(profile(points), dtype=float)
    return (half * (weights[None, :] / values)).sum(axis=1)


def mesh_spacing(s: RevolutionSurface, n: int) -> float:
    """Grid spacing used by assemble_revolution_dirac for n cells."""
    if s.topology is Topology.TWO_CAPS:
        return s.length / (n + 0.5)
    return s.length / n


def _caps_block(s: RevolutionSurface, m: float, n: int) -> tuple[sp.coo_matrix, StaggeredGrid, float]:
    # nodes j h for j = 1..n carry b; half nodes (j + 1/2) h for j = 0..n-1 carry a;
    # b_0 = 0 at t = 0 and a_{n+1/2} = 0 at t = length are the regularity conditions
    h = mesh_spacing(s, n)
    edges = 0.5 * h * np.arange(1, 2 * n + 1)
    cells = _half_cell_integrals(s.profile, edges)
    # cells[k - 1] integrates over [k h/2, (k + 1) h/2]
    j = np.arange(n)
    right = cells[2 * j]
    diag = np.exp(m * right) / h
    left_rows = np.arange(1, n)
    left = cells[2 * left_rows - 1]
    lower = -np.exp(-m * left) / h
    block = sp.coo_matrix(
        (np.concatenate([diag, lower]), (np.concatenate([j, left_rows]), np.concatenate([j, left_rows - 1]))),
        shape=(n, n),
    )
    grid = StaggeredGrid(
        a_points=(j + 0.5) * h,
        a_index=2 * j,
        b_points=(j + 1.0) * h,
        b_index=2 * j + 1,
        period=None,
    )
    return block, grid, h


def _periodic_block(s: RevolutionSurface, m: float, n: int) -> tuple[sp.coo_matrix, StaggeredGrid, float]:
    grid = _periodic_grid(s.length, n)
    h = mesh_spacing(s, n)
    edges = 0.5 * h * np.arange(2 * n + 1)
    cells = _half_cell_integrals(s.profile, edges)
    j = np.arange(n)
    forward = (j + 1) % n
    seam = np.ones(n)
    if s.t_spin is SpinStructure.BOUNDING:
        seam[-1] = -1.0
    upper = seam * np.exp(m * cells[2 * j + 1]) / h
    diag = -np.exp(-m * cells[2 * j]) / h
    block = sp.coo_matrix(
        (np.concatenate([upper, diag]), (np.concatenate([j, j]), np.concatenate([forward, j]))),
        shape=(n, n),
    )
    return block, grid, h


def assemble_revolution_dirac(s: RevolutionSurface, m: float, n: int) -> DiscreteDirac:
    """Mode-m block of the Dirac operator of s, conjugated by phi^{1/2}.

    The block is [[0, L], [L*, 0]] with L = d/dt + m/phi, differenced in the
    exponentially fitted form w^{-1} d/dt (w u), w = exp(m int dt/phi), so the
    local t^m behaviour at the caps is reproduced exactly. Mode -m is the
    component swap of mode m with the sign reversed.
    """
    if n < MIN_GRID:
        raise ValueError(f"Surface grid size must be >= {MIN_GRID}, got {n}")
    if not s.allowed_mode(m):
        raise ValueError(
            f"Mode {m:g} does not match the {s.theta_spin.value} theta spin structure "
            "(bounding needs half-integers, non_bounding needs integers)"
        )
    weight = abs(m)
    if s.topology is Topology.TWO_CAPS:
        block, grid, h = _caps_block(s, weight, n)
    else:
        block, grid, h = _periodic_block(s, weight, n)
    matrix = _chiral_matrix(block, grid.a_index, grid.b_index, 2 * n)
    if m < 0:
        matrix = -matrix
        grid = grid.swapped()
    logger.debug("assembled mode %g on %s with n=%d", m, s.topology.value, n)
    return DiscreteDirac(
        matrix=matrix,
        mesh=h,
        mode=float(m),
        copies=1,
        grid=grid,
        label=f"{s.label} mode={m:g}".strip(),
    )
