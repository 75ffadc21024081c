"""The one-parameter family of three planes with convex pairs and non-convex union.

All entries live in Q(sqrt 3) and are carried exactly as :class:`QuadSurd`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (
    CNum, Mat2, QuadSurd, Spectrum, SpectrumKind, eigen_spectrum, format_scalar,
    parse_scalar, sign, sqrt_any,
)
from .errors import DegenerateEpsilon
from .planes import GraphPlane

__all__ = [
    "ThomasPair", "ThomasSpectra", "thomas_matrices", "thomas_limit", "thomas_spectra",
    "thomas_graphs", "THOMAS_CHANGE",
]

SQRT3 = QuadSurd(0, 1, 3)

# (z, w) -> (z + w, i(w - z)), row-major
THOMAS_CHANGE = (CNum(1), CNum(1), CNum(0, -1), CNum(0, 1))


@dataclass(frozen=True)
class ThomasPair:
    epsilon: object
    A1: Mat2
    A2: Mat2

    def to_json(self):
        return {"epsilon": None if self.epsilon is None else format_scalar(self.epsilon),
                "planes": [{"matrix": self.A1.to_json()}, {"matrix": self.A2.to_json()}]}


def _eps(eps):
    e = parse_scalar(eps) if not isinstance(eps, Fraction) else eps
    if not isinstance(e, Fraction):
        raise DegenerateEpsilon("epsilon must be rational")
    if e in (0, 1, -1):
        raise DegenerateEpsilon(f"epsilon = {e} is degenerate")
    return e


def thomas_matrices(eps) -> ThomasPair:
    e = _eps(eps)
    p, m = 1 + e, 1 - e
    d1 = e / (SQRT3 * p)  # epsilon / (sqrt3 (1 + epsilon))
    d2 = e / (SQRT3 * m)
    off = (1 / p, -1 / m)
    A1 = Mat2(d1, off[0], off[1], -d2)
    A2 = Mat2(-d1, off[0], off[1], d2)
    return ThomasPair(e, A1, A2)


def thomas_limit() -> ThomasPair:
    """The common limit matrix as epsilon -> 0 (not totally real)."""
    L = Mat2.of([[0, 1], [-1, 0]])
    return ThomasPair(None, L, L)


@dataclass(frozen=True)
class ThomasSpectra:
    closed_form: tuple  # Spectrum for A1, A2 from the explicit eigenvalue formulas
    computed: tuple     # eigen_spectrum of the matrices
    eigenvalues: tuple  # ((re, im), (re, -im)) or ((l1, 0), (l2, 0)) per matrix

    @property
    def agree(self) -> bool:
        return all(sign(a.trace - b.trace) == 0 and sign(a.det - b.det) == 0
                   and sign(a.discriminant - b.discriminant) == 0 and a.kind is b.kind
                   for a, b in zip(self.closed_form, self.computed))

    def to_json(self):
        out = []
        for sp, ev in zip(self.computed, self.eigenvalues):
            d = sp.to_json()
            d["eigenvalues"] = [[format_scalar(re), format_scalar(im)] for re, im in ev]
            out.append(d)
        return {"A1": out[0], "A2": out[1], "closedFormAgrees": self.agree}


def thomas_spectra(eps) -> ThomasSpectra:
    """Spectra from the explicit eigenvalue formulas, cross-checked with the matrices.

    For A1 the eigenvalues are ``(-e^2 +- sqrt(4e^2 - 3)) / (sqrt3 (1 - e^2))``;
    for A2 the sign of ``e^2`` flips.
    """
    e = _eps(eps)
    den = SQRT3 * (1 - e * e)
    rad = 4 * e * e - 3
    disc = 4 * rad / (3 * (1 - e * e) ** 2)
    kind = (SpectrumKind.RealDistinct if rad > 0 else
            SpectrumKind.RealRepeated if rad == 0 else SpectrumKind.ComplexConjugate)
    closed, evs = [], []
    for s in (-1, 1):
        centre = s * e * e / den
        # (c + r)(c - r) with r^2 = rad / den^2
        det = (e ** 4 - rad) / (3 * (1 - e * e) ** 2)
        closed.append(Spectrum(2 * centre, det, disc, kind))
        half = sqrt_any(abs(rad) * 3) / (3 * (1 - e * e))  # sqrt|rad| / den, as a single surd
        if kind is SpectrumKind.ComplexConjugate:
            evs.append(((centre, half), (centre, -half)))
        else:
            evs.append(((centre + half, Fraction(0)), (centre - half, Fraction(0)))
                       if _same_field(centre, half) else
                       ((float(centre) + float(half), 0.0), (float(centre) - float(half), 0.0)))
    pair = thomas_matrices(e)
    computed = (eigen_spectrum(pair.A1), eigen_spectrum(pair.A2))
    return ThomasSpectra(tuple(closed), computed, tuple(evs))


def _same_field(a, b):
    try:
        a + b
    except ValueError:
        return False
    return True


def thomas_graphs(eps):
    """The three planes as graphs ``w = a z + b conj(z)`` before the change of coordinates."""
    e = _eps(eps)
    half = Fraction(1, 2)
    P0 = GraphPlane(CNum(0), CNum(1))
    P1 = GraphPlane(CNum(-3 / (2 * e), SQRT3 / (2 * e)), CNum(-half, SQRT3 * half))
    P2 = GraphPlane(CNum(-3 / (2 * e), -SQRT3 / (2 * e)), CNum(-half, -SQRT3 * half))
    return P0, P1, P2
