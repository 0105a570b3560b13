"""Exact computations with nilpotent Jacobian maps and Keller maps."""

from .scalars import QQ, Field, Matrix

__all__ = ["QQ", "Field", "Matrix"]
__version__ = "0.1.0"
