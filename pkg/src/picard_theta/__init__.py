"""Exact computations around the theta operator on Picard modular forms mod p."""

from .qfield import FieldCtx, FqElem, FqField, FracIdeal, KElem

__version__ = "0.1.0"

__all__ = ["FieldCtx", "FqElem", "FqField", "FracIdeal", "KElem", "__version__"]
