"""Topological lower bound on the dimension of the space of harmonic spinors."""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

_SURGERY_SUFFIX = " [after surgery of codimension >= 2]"


@dataclass(frozen=True)
class TopologicalData:
    """Spin-bordism data of a closed spin manifold.

    a_hat is read only when n = 0 mod 4 and alpha_nonzero only when n = 1, 2 mod 8.
    """

    n: int
    a_hat: int = 0
    alpha_nonzero: bool = False
    label: str = ""

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"Dimension must be a positive integer, got {self.n}")


class Minimality(str, Enum):
    MINIMAL = "minimal"
    NON_MINIMAL = "non-minimal"
    INCONSISTENT = "inconsistent"


def as_lower_bound(t: TopologicalData) -> int:
    """|A-hat| when n = 0 mod 4; 1 or 2 when n = 1 or 2 mod 8 and alpha != 0; else 0."""
    residue = t.n % 8
    if t.n % 4 == 0:
        return abs(t.a_hat)
    if residue == 1 and t.alpha_nonzero:
        return 1
    if residue == 2 and t.alpha_nonzero:
        return 2
    return 0


def is_d_minimal(kernel_dim: int, t: TopologicalData) -> Minimality:
    """A kernel below the bound is a numerical undercount, never a minimal metric."""
    if kernel_dim < 0:
        raise ValueError(f"Kernel dimension must be nonnegative, got {kernel_dim}")
    bound = as_lower_bound(t)
    if kernel_dim == bound:
        return Minimality.MINIMAL
    if kernel_dim > bound:
        return Minimality.NON_MINIMAL
    return Minimality.INCONSISTENT


def surgery_bound_transfer(t: TopologicalData) -> TopologicalData:
    """Same invariants after surgery of codimension >= 2; only the label changes."""
    if t.label.endswith(_SURGERY_SUFFIX):
        return t
    return replace(t, label=f"{t.label}{_SURGERY_SUFFIX}")
