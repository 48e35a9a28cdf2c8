"""Model manifolds with closed-form Dirac spectra."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np


class SpinStructure(str, Enum):
    """Spin structure along one circle direction."""

    BOUNDING = "bounding"
    NON_BOUNDING = "non_bounding"

    @property
    def shift(self) -> int:
        """Half-integer shift of the Fourier index (1 for antiperiodic spinors)."""
        return 1 if self is SpinStructure.BOUNDING else 0

    @classmethod
    def from_shift(cls, shift: int) -> "SpinStructure":
        if shift not in (0, 1):
            raise ValueError(f"Spin shift must be 0 or 1, got {shift}")
        return cls.BOUNDING if shift == 1 else cls.NON_BOUNDING


@dataclass(frozen=True)
class SpinCircle:
    length: float
    structure: SpinStructure

    def __post_init__(self) -> None:
        if not self.length > 0:
            raise ValueError(f"Circle length must be positive, got {self.length}")
        object.__setattr__(self, "structure", SpinStructure(self.structure))


@dataclass(frozen=True)
class FlatTorus:
    """Flat torus R^n / lattice; basis rows are the lattice generators."""

    basis: np.ndarray
    spin: tuple[int, ...]

    def __post_init__(self) -> None:
        basis = np.atleast_2d(np.array(self.basis, dtype=float))
        if basis.ndim != 2 or basis.shape[0] != basis.shape[1]:
            raise ValueError(f"Torus basis must be a square matrix, got shape {basis.shape}")
        if basis.shape[0] not in (1, 2, 3):
            raise ValueError(f"Torus dimension must be 1, 2 or 3, got {basis.shape[0]}")
        if abs(np.linalg.det(basis)) <= 1e-12:
            raise ValueError("Torus basis is singular")
        spin = tuple(int(s) for s in self.spin)
        if len(spin) != basis.shape[0]:
            raise ValueError(f"Spin vector has {len(spin)} entries for a {basis.shape[0]}-torus")
        if any(s not in (0, 1) for s in spin):
            raise ValueError(f"Spin entries must be 0 or 1, got {spin}")
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "spin", spin)

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    @property
    def dual_basis(self) -> np.ndarray:
        """Rows w_j with v_i . w_j = delta_ij."""
        return np.linalg.inv(self.basis).T

    @classmethod
    def square(cls, side: float, spin: tuple[int, ...]) -> "FlatTorus":
        return cls(basis=side * np.eye(len(spin)), spin=spin)
