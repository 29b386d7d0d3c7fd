"""Kernel selection: compiled ``_ckernels`` when built, else ``_pykernels``.

Set ``SUPERFLAG_PURE=1`` to force the pure-Python fallback.
"""
import os

BACKEND = "python"

if os.environ.get("SUPERFLAG_PURE", "") not in ("1", "true", "yes"):
    try:
        from superflag._ckernels import (  # type: ignore[import-not-found]
            even_merge,
            gauss_jordan_inverse,
            mat_mul_terms,
            odd_merge,
            poly_axpy,
            poly_mul,
            polar_terms,
            sparse_rref,
        )

        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from superflag._pykernels import (  # noqa: F401
        even_merge,
        gauss_jordan_inverse,
        mat_mul_terms,
        odd_merge,
        poly_axpy,
        poly_mul,
        polar_terms,
        sparse_rref,
    )

__all__ = ["BACKEND", "even_merge", "gauss_jordan_inverse", "mat_mul_terms", "odd_merge", "poly_axpy", "poly_mul",
           "polar_terms", "sparse_rref"]
