"""Closed-form spectra and the tables that carry them."""

from spindirac.spectra.exact import (
    ProductBoundCheck,
    check_product_bound,
    circle_kernel_dim,
    circle_spectrum,
    flat_torus_spectrum,
    point_spectrum,
    product_square_spectrum,
    sphere_spectrum,
    torus_kernel_dim,
)
from spindirac.spectra.models import FlatTorus, SpinCircle, SpinStructure
from spindirac.spectra.table import SpectrumTable, format_value

__all__ = [
    "FlatTorus",
    "ProductBoundCheck",
    "SpectrumTable",
    "SpinCircle",
    "SpinStructure",
    "check_product_bound",
    "circle_kernel_dim",
    "circle_spectrum",
    "flat_torus_spectrum",
    "format_value",
    "point_spectrum",
    "product_square_spectrum",
    "sphere_spectrum",
    "torus_kernel_dim",
]
