"""Polynomial convexity of unions of totally-real planes through the origin in C^2.

Exact layer: :mod:`core` (field arithmetic), :mod:`planes`, :mod:`normalform`,
:mod:`decide` and :mod:`certify`.  Numerical oracle: :mod:`hullprobe`.
"""

from .core import Mat2, QuadSurd, parse_scalar, format_scalar, eigen_spectrum
from .planes import WeinstockFamily, family_from_json, to_weinstock_form
from .decide import Outcome, Rule, Verdict, decide, weinstock_pair
from .certify import verify_certificate, certificate_from_json, certificate_id
from .thomas import thomas_matrices
from ._kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "Mat2", "QuadSurd", "parse_scalar", "format_scalar", "eigen_spectrum",
    "WeinstockFamily", "family_from_json", "to_weinstock_form",
    "Outcome", "Rule", "Verdict", "decide", "weinstock_pair",
    "verify_certificate", "certificate_from_json", "certificate_id", "thomas_matrices",
    "BACKEND", "__version__",
]
