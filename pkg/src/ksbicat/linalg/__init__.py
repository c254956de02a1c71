"""Exact linear algebra over Q and F_p."""

from .field import GF, QQ, Field, FieldError, is_prime
from .matrix import (
    Matrix,
    QuotientSpace,
    ShapeError,
    SingularMatrixError,
    Solution,
    Subspace,
    rref_rows,
    solve_linear,
    span_basis,
)
from .poly import (
    Factorization,
    Polynomial,
    PolynomialError,
    characteristic_polynomial,
    crt_idempotent_polys,
    factor_split,
    first_dependency,
    minimal_polynomial,
    poly_gcd,
    poly_xgcd,
)

__all__ = [
    "GF", "QQ", "Field", "FieldError", "is_prime",
    "Matrix", "QuotientSpace", "ShapeError", "SingularMatrixError", "Solution", "Subspace",
    "rref_rows", "solve_linear", "span_basis",
    "Factorization", "Polynomial", "PolynomialError", "characteristic_polynomial",
    "crt_idempotent_polys", "factor_split", "first_dependency", "minimal_polynomial",
    "poly_gcd", "poly_xgcd",
]
