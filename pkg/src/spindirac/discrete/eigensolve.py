"""Smallest-magnitude eigenpairs of symmetric Dirac matrices."""

from __future__ import annotations

from dataclasses import dataclass
import logging

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, eigsh
from scipy.sparse.linalg import norm as sparse_norm

from spindirac.config import DENSE_SOLVE_LIMIT, RESIDUAL_TOL
from spindirac.discrete.operator import DiscreteDirac
from spindirac.errors import EigenSolverError

logger = logging.getLogger(__name__)

_ZERO_TOL = 1e-10
_WINDOW_MARGIN = 4


@dataclass(frozen=True)
class Eigenpair:
    value: float
    vector: np.ndarray
    residual: float


def _as_operator(op: DiscreteDirac | np.ndarray | sp.spmatrix) -> tuple[sp.csr_matrix, int, bool, bool]:
    if isinstance(op, DiscreteDirac):
        return op.matrix, op.copies, op.chiral, op.is_tridiagonal()
    matrix = sp.csr_matrix(op, dtype=float)
    if matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"Matrix must be square, got {matrix.shape}")
    return matrix, 1, False, False


def _dense_pairs(matrix: sp.csr_matrix) -> tuple[np.ndarray, np.ndarray]:
    return scipy.linalg.eigh(matrix.toarray())


def _tridiagonal_window(matrix: sp.csr_matrix, want: int) -> tuple[np.ndarray, np.ndarray]:
    # the middle of a mirror-symmetric spectrum holds the smallest |lambda|
    n = matrix.shape[0]
    lower = max(0, n // 2 - want)
    upper = min(n - 1, n // 2 + want - 1)
    return scipy.linalg.eigh_tridiagonal(
        matrix.diagonal(),
        matrix.diagonal(1),
        select="i",
        select_range=(lower, upper),
    )


def _shift_invert_window(matrix: sp.csr_matrix, want: int, scale: float) -> tuple[np.ndarray, np.ndarray]:
    # exact zero modes make sigma = 0 singular
    sigma = 1e-7 * scale
    count = min(matrix.shape[0] - 2, 2 * want)
    # fixed start vector keeps repeated runs byte-identical
    start = np.random.default_rng(0).standard_normal(matrix.shape[0])
    try:
        return eigsh(matrix.tocsc(), k=count, sigma=sigma, which="LM", v0=start)
    except ArpackNoConvergence as exc:
        raise EigenSolverError(f"Shift-invert iteration did not converge: {exc}") from exc


def _merge_copies(
    values: np.ndarray,
    vectors: np.ndarray,
    copies: int,
    zero_tol: float,
) -> list[tuple[float, np.ndarray]]:
    """Keep one representative out of each run of `copies` repeated eigenvalues."""
    order = np.argsort(np.abs(values), kind="stable")
    values = values[order]
    vectors = vectors[:, order]
    if copies == 1:
        return [(float(values[i]), vectors[:, i]) for i in range(values.shape[0])]

    merged: list[tuple[float, np.ndarray]] = []
    for mask in (np.abs(values) <= zero_tol, values > zero_tol, values < -zero_tol):
        idx = np.flatnonzero(mask)
        for start in range(0, idx.shape[0] - copies + 1, copies):
            pick = idx[start]
            merged.append((0.0 if abs(values[pick]) <= zero_tol else float(values[pick]), vectors[:, pick]))
    return merged


def eig_smallest(op: DiscreteDirac | np.ndarray | sp.spmatrix, k: int) -> list[Eigenpair]:
    """Return the k eigenpairs of smallest |lambda|, sorted by (|lambda|, lambda).

    Raises EigenSolverError when any residual ||A v - lambda v|| exceeds
    1e-8 ||A||.
    """
    matrix, copies, chiral, tridiagonal = _as_operator(op)
    n = matrix.shape[0]
    if k < 1 or k * copies > n:
        raise ValueError(f"Requested {k} eigenpairs from an operator of dimension {n}")
    scale = float(sparse_norm(matrix, 1)) or 1.0
    want = k * copies + _WINDOW_MARGIN * copies

    if n <= DENSE_SOLVE_LIMIT:
        values, vectors = _dense_pairs(matrix)
    elif tridiagonal and chiral:
        values, vectors = _tridiagonal_window(matrix, want)
    else:
        values, vectors = _shift_invert_window(matrix, want, scale)

    merged = _merge_copies(np.asarray(values), np.asarray(vectors), copies, _ZERO_TOL * scale)
    merged.sort(key=lambda pair: (abs(pair[0]), pair[0]))
    if len(merged) < k:
        raise EigenSolverError(f"Solver returned {len(merged)} distinct eigenpairs; {k} requested")

    pairs: list[Eigenpair] = []
    for value, vector in merged[:k]:
        residual = float(np.linalg.norm(matrix @ vector - value * vector))
        if residual > RESIDUAL_TOL * scale:
            raise EigenSolverError(
                f"Eigenpair at {value:.6g} has residual {residual:.3e} above {RESIDUAL_TOL:g} * ||A||"
            )
        pairs.append(Eigenpair(value=value, vector=vector, residual=residual))
    logger.debug("eig_smallest n=%d k=%d copies=%d smallest=%.6g", n, k, copies, pairs[0].value)
    return pairs
