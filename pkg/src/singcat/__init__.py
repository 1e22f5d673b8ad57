"""Exceptional collections in graded singularity categories of invertible polynomials."""

__version__ = "0.1.0"

from .invpoly import InvertiblePolynomial, classify, grading_data, milnor_number, transpose  # noqa: E402

__all__ = ["InvertiblePolynomial", "classify", "grading_data", "milnor_number", "transpose", "__version__"]
