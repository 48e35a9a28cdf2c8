"""Closed-form Dirac spectra of circles, flat tori, round spheres and products."""

from __future__ import annotations

from dataclasses import dataclass
import logging
import math

import numpy as np

from spindirac.config import EXACT_MERGE_TOL
from spindirac.errors import InsufficientCutoffError
from spindirac.spectra.models import FlatTorus, SpinCircle, SpinStructure
from spindirac.spectra.table import SpectrumTable, format_value

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProductBoundCheck:
    passed: bool
    margin: float


def _require_cutoff(cutoff: float) -> None:
    if not cutoff > 0:
        raise ValueError(f"cutoff must be positive, got {cutoff}")


def circle_spectrum(c: SpinCircle, cutoff: float) -> SpectrumTable:
    """Eigenvalues (2 pi / L)(k + s/2), each simple, for all |value| <= cutoff."""
    _require_cutoff(cutoff)
    unit = 2.0 * math.pi / c.length
    half_shift = 0.5 * c.structure.shift
    reach = math.ceil(cutoff / unit) + 1
    ks = np.arange(-reach - 1, reach + 1)
    values = unit * (ks + half_shift)
    values = values[np.abs(values) <= cutoff + EXACT_MERGE_TOL]
    return SpectrumTable.from_values(
        values,
        cutoff=cutoff,
        symmetric=True,
        description=f"circle length={format_value(c.length)} structure={c.structure.value}",
    )


def circle_kernel_dim(c: SpinCircle) -> int:
    return 1 if c.structure is SpinStructure.NON_BOUNDING else 0


def _shifted_dual_points(t: FlatTorus, cutoff: float) -> np.ndarray:
    dual = t.dual_basis
    # |k W| >= sigma_min(W) |k|; one extra shell beyond that radius
    sigma_min = float(np.linalg.svd(dual, compute_uv=False)[-1])
    reach = math.ceil(cutoff / (2.0 * math.pi * sigma_min)) + 1
    axis = np.arange(-reach, reach + 1, dtype=float)
    grid = np.stack(np.meshgrid(*([axis] * t.dim), indexing="ij"), axis=-1).reshape(-1, t.dim)
    shift = 0.5 * np.asarray(t.spin, dtype=float)
    return (grid + shift) @ dual


def flat_torus_spectrum(t: FlatTorus, cutoff: float) -> SpectrumTable:
    """Eigenvalues +-2 pi |xi| over the spin-shifted dual lattice.

    In dimension 1 the spinor bundle is a line and the eigenvalue is signed,
    2 pi xi, which reproduces circle_spectrum for the lattice L Z.
    """
    _require_cutoff(cutoff)
    xi = _shifted_dual_points(t, cutoff)
    description = (
        f"torus dim={t.dim} spin={''.join(str(s) for s in t.spin)} "
        f"basis={';'.join(','.join(format_value(v) for v in row) for row in t.basis)}"
    )
    if t.dim == 1:
        values = 2.0 * math.pi * xi[:, 0]
        values = values[np.abs(values) <= cutoff + EXACT_MERGE_TOL]
        return SpectrumTable.from_values(values, cutoff=cutoff, symmetric=True, description=description)

    spinor_rank = 2 ** (t.dim // 2)
    magnitudes = 2.0 * math.pi * np.linalg.norm(xi, axis=1)
    magnitudes = magnitudes[magnitudes <= cutoff + EXACT_MERGE_TOL]
    zero = magnitudes <= EXACT_MERGE_TOL
    nonzero = magnitudes[~zero]
    values = np.concatenate([np.zeros(int(zero.sum())), nonzero, -nonzero])
    mults = np.concatenate(
        [
            np.full(int(zero.sum()), spinor_rank, dtype=int),
            np.full(2 * nonzero.shape[0], spinor_rank // 2, dtype=int),
        ]
    )
    logger.debug("flat_torus_spectrum enumerated %d lattice points below %s", magnitudes.shape[0], cutoff)
    return SpectrumTable.from_values(
        values, cutoff=cutoff, symmetric=True, multiplicities=mults, description=description
    )


def torus_kernel_dim(t: FlatTorus) -> int:
    if any(t.spin):
        return 0
    return 2 ** (t.dim // 2)


def sphere_spectrum(l: int, cutoff: float) -> SpectrumTable:
    """Unit round sphere S^l: +-(l/2 + k) with multiplicity 2^{floor(l/2)} C(k + l - 1, k)."""
    if l < 1:
        raise ValueError(f"Sphere dimension must be >= 1, got {l}")
    _require_cutoff(cutoff)
    if l == 1:
        circle = circle_spectrum(SpinCircle(2.0 * math.pi, SpinStructure.BOUNDING), cutoff)
        return SpectrumTable(circle.entries, cutoff, True, description="sphere l=1")

    rank = 2 ** (l // 2)
    values: list[float] = []
    mults: list[int] = []
    k = 0
    while l / 2.0 + k <= cutoff + EXACT_MERGE_TOL:
        mult = rank * math.comb(k + l - 1, k)
        values.extend((l / 2.0 + k, -(l / 2.0 + k)))
        mults.extend((mult, mult))
        k += 1
    return SpectrumTable.from_values(
        values, cutoff=cutoff, symmetric=True, multiplicities=mults, description=f"sphere l={l}"
    )


def point_spectrum() -> SpectrumTable:
    """Zero-dimensional factor: a single zero mode, complete at every cutoff."""
    return SpectrumTable(entries=((0.0, 1),), cutoff=math.inf, symmetric=True, description="point")


def _min_square(table: SpectrumTable) -> float:
    return table.min_abs() ** 2


def product_square_spectrum(a: SpectrumTable, b: SpectrumTable, cutoff: float) -> SpectrumTable:
    """Spectrum of (D^a)^2 + (D^b)^2 on the Riemannian product, values <= cutoff."""
    _require_cutoff(cutoff)
    if not a.entries or not b.entries:
        raise ValueError("Product spectrum needs two nonempty tables")
    for name, own, other in (("first", a, b), ("second", b, a)):
        if own.cutoff**2 + _min_square(other) < cutoff - EXACT_MERGE_TOL:
            raise InsufficientCutoffError(
                f"{name} factor is complete only to {format_value(own.cutoff)}; "
                f"squared cutoff {format_value(cutoff)} needs at least "
                f"{format_value(math.sqrt(max(cutoff - _min_square(other), 0.0)))}"
            )

    a_vals = np.array([v for v, _ in a.entries]) ** 2
    a_mult = np.array([m for _, m in a.entries])
    b_vals = np.array([v for v, _ in b.entries]) ** 2
    b_mult = np.array([m for _, m in b.entries])
    sums = np.add.outer(a_vals, b_vals).ravel()
    mults = np.multiply.outer(a_mult, b_mult).ravel()
    keep = sums <= cutoff + EXACT_MERGE_TOL
    return SpectrumTable.from_values(
        sums[keep],
        cutoff=cutoff,
        symmetric=False,
        multiplicities=mults[keep],
        description=f"product-square ({a.description}) x ({b.description})",
    )


def check_product_bound(m: SpectrumTable, l: int) -> ProductBoundCheck:
    """Compare the smallest squared eigenvalue of M x S^l with l^2/4."""
    if not m.entries:
        raise ValueError("Product spectrum table is empty")
    if l < 1:
        raise ValueError(f"Sphere dimension must be >= 1, got {l}")
    margin = min(value for value, _ in m.entries) - l * l / 4.0
    return ProductBoundCheck(passed=margin >= -1e-9, margin=margin)
