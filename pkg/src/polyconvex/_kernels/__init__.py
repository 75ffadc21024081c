"""Kernel selection: compiled extension when available, numpy otherwise.

Set ``POLYCONVEX_PURE=1`` to force the numpy path.
"""

import os

from . import _pykernels as py

if os.environ.get("POLYCONVEX_PURE", "") not in ("", "0"):
    impl = py
    BACKEND = "python"
else:
    try:
        from . import _ckernels as impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        impl = py
        BACKEND = "python"

monomial_exponents = impl.monomial_exponents
monomial_table = impl.monomial_table
polygon_max = impl.polygon_max
constraint_rows = impl.constraint_rows
eval_poly_max = impl.eval_poly_max

__all__ = ["BACKEND", "py", "impl", "monomial_exponents", "monomial_table", "polygon_max",
           "constraint_rows", "eval_poly_max"]
