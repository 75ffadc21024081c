"""Constructive real conjugations of 2x2 families.

Every routine returns a :class:`ConjugationResult` whose conjugator S puts
``S^-1 A S`` into a declared shape.  Arithmetic is exact as long as all square
roots stay inside a single quadratic field; otherwise the construction is
replayed in floating point and the result is flagged ``exact=False``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .core import (
    Mat2, SpectrumKind, commutator, commutator_det, eigen_direction, eigen_spectrum,
    format_scalar, real_eigenvalues, sign, sqrt_any, triple_trace_obstruction,
)
from .errors import (
    EmptyFamily, HypothesisFailed, NotTransverse, DegenerateBase, RealSpectrum,
    RepeatedRealSpectrum,
)

__all__ = [
    "Shape", "ConjugationResult", "ReductionReport", "real_jordan_rotation_form",
    "simultaneous_rotation_form", "pairwise_reduce", "reduced_length",
    "florentino_triangularizable", "common_eigenvector_bruteforce",
    "simultaneous_triangularize", "three_plane_normal_form", "shape_residual",
    "stabilizer_conjugators",
]

RESIDUAL_TOL = 1e-9


class Shape(str, enum.Enum):
    RotationForm = "RotationForm"
    UpperTriangular = "UpperTriangular"
    DiagonalPlusSymmetric = "DiagonalPlusSymmetric"
    DiagonalPlusMixed = "DiagonalPlusMixed"
    RotationPlusMixed = "RotationPlusMixed"


def _rot_res(M):
    return max(abs(float(M.a11 - M.a22)), abs(float(M.a12 + M.a21)))


def _diag_res(M):
    return max(abs(float(M.a12)), abs(float(M.a21)))


def shape_residual(shape: Shape, forms) -> float:
    """Largest deviation of ``forms`` from ``shape`` (0.0 for a perfect match)."""
    if not forms:
        return 0.0
    if shape is Shape.RotationForm:
        return max(_rot_res(M) for M in forms)
    if shape is Shape.UpperTriangular:
        return max(abs(float(M.a21)) for M in forms)
    first, second = forms[0], forms[1]
    if shape is Shape.DiagonalPlusSymmetric:
        return max(_diag_res(first), abs(float(second.a12 - second.a21)))
    if shape is Shape.DiagonalPlusMixed:
        return max(_diag_res(first), abs(float(second.a12 + second.a21)))
    return max(_rot_res(first), abs(float(second.a12 + second.a21)))


@dataclass
class ConjugationResult:
    conjugator: Mat2
    canonical_forms: list
    shape: Shape
    residual: float
    params: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.conjugator.is_exact() and all(M.is_exact() for M in self.canonical_forms)

    def to_json(self):
        return {
            "conjugator": self.conjugator.to_json(),
            "canonicalForms": [M.to_json() for M in self.canonical_forms],
            "shape": self.shape.value,
            "residual": self.residual,
            "exact": self.exact,
            "params": {k: _param_json(v) for k, v in sorted(self.params.items())},
        }


def _param_json(v):
    if isinstance(v, (list, tuple)):
        return [_param_json(x) for x in v]
    if v is None or isinstance(v, (str, bool)):
        return v
    return format_scalar(Fraction(v) if isinstance(v, int) else v)


@dataclass(frozen=True)
class ReductionReport:
    reduced_length: int
    maximal_reduction: tuple  # 1-based positions in the family

    def to_json(self):
        return {"reducedLength": self.reduced_length, "maximalReduction": list(self.maximal_reduction)}


def _finish(S, mats, shape, params=None):
    forms = [A.conj_by(S) for A in mats]
    res = ConjugationResult(S, forms, shape, shape_residual(shape, forms), params or {})
    return res


def _exact_or_float(build, mats, *args):
    """Run ``build`` exactly; on a clash of quadratic fields redo it in floats."""
    try:
        return build([M for M in mats], *args)
    except ValueError:
        return build([M.to_float() for M in mats], *args)


# --- rotation forms ---------------------------------------------------------

def _rotation_conjugator(A: Mat2) -> Mat2:
    a, b, c, d = A.entries()
    if sign(a - d) == 0 and sign(b + c) == 0:
        return Mat2.identity()
    sp = eigen_spectrum(A)
    p = sp.trace / 2
    q = sqrt_any(-sp.discriminant) / 2
    # eigenvector v1 + i v2 of p + iq; S = [v1, -v2] gives [[p, -q], [q, p]]
    if sign(b) != 0:
        v1, v2 = (b, p - a), (0, q)
    else:
        v1, v2 = (p - d, c), (q, 0)
    return Mat2.from_columns(v1, (-v2[0], -v2[1]))


def real_jordan_rotation_form(A: Mat2) -> ConjugationResult:
    """Conjugate a matrix with non-real spectrum to ``[[p, -q], [q, p]]``."""
    if eigen_spectrum(A).kind is not SpectrumKind.ComplexConjugate:
        raise RealSpectrum("matrix has real spectrum")

    def build(ms):
        return _finish(_rotation_conjugator(ms[0]), ms, Shape.RotationForm)

    return _exact_or_float(build, [A])


def simultaneous_rotation_form(As) -> ConjugationResult:
    """One conjugator putting every member in rotation-scaling form.

    Requires pairwise vanishing commutator determinants and a member with
    non-real spectrum; that member (the first one) fixes the conjugator.
    """
    As = list(As)
    pilot = next((j for j, A in enumerate(As)
                  if eigen_spectrum(A).kind is SpectrumKind.ComplexConjugate), None)
    if pilot is None:
        raise HypothesisFailed("no member with non-real spectrum")
    for j, k in itertools.combinations(range(len(As)), 2):
        if sign(commutator_det(As[j], As[k])) != 0:
            raise HypothesisFailed(f"det[A{j + 1},A{k + 1}] != 0")

    def build(ms):
        return _finish(_rotation_conjugator(ms[pilot]), ms, Shape.RotationForm,
                       {"pilot": pilot + 1})

    return _exact_or_float(build, As)


def pairwise_reduce(A1: Mat2, A2: Mat2) -> Mat2:
    """B with (M(A1), M(A2)) equivalent to (R^2, M(B)): ``(A1 A2 + I)(A1 - A2)^-1``."""
    D = A1 - A2
    if sign(D.det()) == 0:
        raise NotTransverse("planes meet outside the origin")
    if sign((A1 * A1 + Mat2.identity()).det()) == 0:
        raise DegenerateBase("A1^2 + I is singular")
    return (A1 * A2 + Mat2.identity()) * D.inv()


# --- reduced length and triangularization ----------------------------------

def _commute(A, B):
    return commutator(A, B).is_zero()


def reduced_length(As) -> ReductionReport:
    """Largest subfamily without a commuting pair (exhaustive search)."""
    As = list(As)
    n = len(As)
    if n == 0:
        raise EmptyFamily("empty family")
    commutes = {(j, k): _commute(As[j], As[k]) for j, k in itertools.combinations(range(n), 2)}
    for size in range(n, 0, -1):
        for sub in itertools.combinations(range(n), size):
            if not any(commutes[p] for p in itertools.combinations(sub, 2)):
                return ReductionReport(size, tuple(j + 1 for j in sub))
    raise AssertionError("unreachable")


def florentino_triangularizable(As) -> bool:
    """Commutator/trace test for simultaneous real upper-triangularizability."""
    As = list(As)
    if not As:
        raise EmptyFamily("empty family")
    if any(sign(eigen_spectrum(A).discriminant) < 0 for A in As):
        return False
    for A, B in itertools.combinations(As, 2):
        if sign(commutator_det(A, B)) != 0:
            return False
    rep = reduced_length(As)
    if rep.reduced_length == 3:
        a, b, c = (As[j - 1] for j in rep.maximal_reduction)
        if sign(triple_trace_obstruction(a, b, c)) != 0:
            return False
    return True


def _candidate_directions(A: Mat2):
    return [eigen_direction(A, lam) for lam in real_eigenvalues(A)]


def _is_eigvec(A: Mat2, v) -> bool:
    Av = A.apply(v)
    return sign(v[0] * Av[1] - v[1] * Av[0]) == 0


def common_eigenvector_bruteforce(As):
    """Search a common real eigenvector directly; returns it or None.

    Independent of the commutator test: candidates are the eigen-directions
    of the first non-scalar member, each checked against every member.
    """
    As = list(As)
    movers = [A for A in As if not A.is_scalar()]
    if not movers:
        return (Fraction(1), Fraction(0))
    for v in _candidate_directions(movers[0]):
        if all(_is_eigvec(A, v) for A in movers[1:]):
            return v
    return None


def simultaneous_triangularize(As) -> ConjugationResult:
    """Exact common upper-triangular form built from a common eigenvector."""
    As = list(As)
    if not florentino_triangularizable(As):
        raise HypothesisFailed("family is not simultaneously triangularizable")

    def build(ms):
        tol = 0.0 if all(M.is_exact() for M in ms) else 1e-10
        movers = [M for M in ms if not M.is_scalar()]
        if not movers:
            return _finish(Mat2.identity(), ms, Shape.UpperTriangular)
        for v in _candidate_directions(movers[0]):
            ok = True
            for M in movers[1:]:
                Mv = M.apply(v)
                if sign(v[0] * Mv[1] - v[1] * Mv[0], tol) != 0:
                    ok = False
                    break
            if ok:
                e = (0, 1) if sign(v[0]) != 0 else (1, 0)
                return _finish(Mat2.from_columns(v, e), ms, Shape.UpperTriangular)
        raise HypothesisFailed("no common real eigenvector found")

    return _exact_or_float(build, As)


# --- three planes -----------------------------------------------------------

def _diagonalizer(A: Mat2) -> Mat2:
    if sign(A.a12) == 0 and sign(A.a21) == 0:
        return Mat2.identity()
    l1, l2 = real_eigenvalues(A)
    return Mat2.from_columns(eigen_direction(A, l1), eigen_direction(A, l2))


def _normal_form_real(ms):
    A1, A2 = ms
    S1 = _diagonalizer(A1)
    M = A2.conj_by(S1)
    b, c = M.a12, M.a21
    if sign(b) == 0 or sign(c) == 0:
        if sign(c) != 0:  # lower triangular: swap the basis
            S1 = Mat2.from_columns((S1.a12, S1.a22), (S1.a11, S1.a21))
        return _finish(S1, ms, Shape.UpperTriangular, {"g": [1, 1]})
    g = sqrt_any(abs(c / b))
    S = S1 * Mat2.diag(1 / g, 1)
    shape = Shape.DiagonalPlusSymmetric if sign(b * c) > 0 else Shape.DiagonalPlusMixed
    return _finish(S, ms, shape, {"g": [g, 1]})


def _normal_form_complex(ms):
    A1, A2 = ms
    S1 = _rotation_conjugator(A1)
    M = A2.conj_by(S1)
    m1, m2, m3, m4 = M.entries()
    if sign(m2 + m3) == 0:
        return _finish(S1, ms, Shape.RotationPlusMixed, {"mu": None})
    k = (m1 - m4) / (m2 + m3)
    mu = -k + sqrt_any(k * k + 1)
    G = Mat2(mu, -1, 1, mu)
    return _finish(S1 * G.inv(), ms, Shape.RotationPlusMixed, {"mu": mu, "k": k})


def three_plane_normal_form(A1: Mat2, A2: Mat2) -> ConjugationResult:
    """Joint normal form of a pair with A1 non-degenerate.

    Real distinct spectrum: A1 becomes diagonal and A2 gets off-diagonal
    entries of equal modulus (symmetric when their product is positive, mixed
    otherwise).  Non-real spectrum: A1 becomes a rotation-scaling and A2 gets
    antisymmetric off-diagonal entries, using the larger root of the
    rotation quadratic.
    """
    kind = eigen_spectrum(A1).kind
    if kind is SpectrumKind.RealRepeated:
        raise RepeatedRealSpectrum("A1 has a repeated eigenvalue")
    build = _normal_form_real if kind is SpectrumKind.RealDistinct else _normal_form_complex
    return _exact_or_float(build, [A1, A2])


def stabilizer_conjugators(result: ConjugationResult, rng, count: int = 10):
    """Random alternative conjugators that keep the three-plane shape.

    Each is ``S X`` with X drawn from the symmetries of the canonical first
    matrix that preserve the declared shape of the second: scalings, the
    basis swap and sign flips for diagonal forms; scalings, the quarter turn
    and the reflection for rotation forms.
    """
    S = result.conjugator
    out = []
    swap = Mat2.of([[0, 1], [1, 0]])
    flip = Mat2.diag(1, -1)
    quarter = Mat2.of([[0, -1], [1, 0]])
    commuting = (result.shape is Shape.RotationPlusMixed
                 and sign(commutator_det(*result.canonical_forms)) == 0)
    for _ in range(count):
        alpha = Fraction(int(rng.integers(1, 20)), int(rng.integers(1, 20)))
        if rng.random() < 0.5:
            alpha = -alpha
        X = Mat2.identity() * alpha
        if result.shape is Shape.RotationPlusMixed:
            if commuting:
                X = X * Mat2.rotation(Fraction(int(rng.integers(-9, 10))), Fraction(int(rng.integers(1, 10))))
            if rng.random() < 0.5:
                X = X * quarter
            if rng.random() < 0.5:
                X = X * flip
        else:
            if rng.random() < 0.5:
                X = X * swap
            if rng.random() < 0.5:
                X = X * flip
        out.append(S * X)
    return out
