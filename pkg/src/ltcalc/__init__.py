"""Exact p-adic operator calculus on Lubin-Tate formal groups."""

from .fields import LocalField, Scalar, make_field
from .series import LaurentSeries

__all__ = ["LocalField", "Scalar", "make_field", "LaurentSeries"]

__version__ = "0.1.0"
