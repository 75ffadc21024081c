"""Exact scalars and 2x2 real matrices.

Scalars are :class:`fractions.Fraction` by default.  Elements of a real
quadratic field Q(sqrt d) are :class:`QuadSurd`; they arise from exact square
roots of rationals (eigenvalues, eigenvectors) and from the sqrt(3) entries of
the Thomas family.  Python floats play the "Approx" role and are only produced
by constructive conjugators whose square roots leave every quadratic field.

Every predicate that feeds a verdict is a sign test on exact values.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import ValidationError

__all__ = [
    "QuadSurd", "sqrt_exact", "parse_scalar", "format_scalar", "sign", "is_exact",
    "to_float", "CNum", "Mat2", "Spectrum", "SpectrumKind", "eigen_spectrum",
    "commutator", "commutator_det", "triple_trace_obstruction",
    "is_totally_real_matrix", "real_eigenvalues", "eigen_direction", "pair_obstructed",
]


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"not a rational: {x!r}")


class QuadSurd:
    """The real number ``a + b*sqrt(d)`` with rational a, b and squarefree d > 1.

    Arithmetic returns a plain :class:`Fraction` whenever the irrational part
    cancels, so results mix freely with rationals.  Operations between
    different fields raise ``ValueError``; operations with floats degrade to
    floats.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d):
        self.a = _frac(a)
        self.b = _frac(b)
        self.d = int(d)
        if self.d < 2:
            raise ValueError("radicand must be > 1")

    @staticmethod
    def make(a, b, d):
        if b == 0:
            return _frac(a)
        return QuadSurd(a, b, d)

    def _coerce(self, other):
        if isinstance(other, QuadSurd):
            if other.d != self.d:
                raise ValueError(f"mixing Q(sqrt {self.d}) with Q(sqrt {other.d})")
            return other.a, other.b
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        if isinstance(other, float):
            return float(self) + other
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadSurd.make(self.a + c[0], self.b + c[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, float):
            return float(self) - other
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadSurd.make(self.a - c[0], self.b - c[1], self.d)

    def __rsub__(self, other):
        if isinstance(other, float):
            return other - float(self)
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadSurd.make(c[0] - self.a, c[1] - self.b, self.d)

    def __mul__(self, other):
        if isinstance(other, float):
            return float(self) * other
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        a, b = c
        return QuadSurd.make(self.a * a + self.d * self.b * b, self.a * b + self.b * a, self.d)

    __rmul__ = __mul__

    def inverse(self):
        n = self.a * self.a - self.d * self.b * self.b
        if n == 0:
            raise ZeroDivisionError("QuadSurd division by zero")
        return QuadSurd.make(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, float):
            return float(self) / other
        if isinstance(other, QuadSurd):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("QuadSurd division by zero")
            return QuadSurd.make(self.a / other, self.b / other, self.d)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, float):
            return other / float(self)
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = Fraction(1)
        for _ in range(n):
            out = out * self
        return out

    def sign(self):
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with d b^2 (never equal for squarefree d)
        return sa if self.a * self.a > self.d * self.b * self.b else sb

    def conjugate(self):
        return QuadSurd(self.a, -self.b, self.d)

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def _cmp(self, other):
        if isinstance(other, float):
            f = float(self)
            return (f > other) - (f < other)
        diff = self - other
        return sign(diff)

    def __eq__(self, other):
        if isinstance(other, (QuadSurd, int, Fraction, float)):
            try:
                return self._cmp(other) == 0
            except ValueError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return self.sign() != 0

    def __repr__(self):
        return f"QuadSurd({self.a}, {self.b}, {self.d})"

    def __str__(self):
        return format_scalar(self)


def _split_square(n: int):
    """Return (k, m) with n == k*k*m and m free of small square factors."""
    k = 1
    m = n
    p = 2
    while p * p <= m and p < 20000:
        pp = p * p
        while m % pp == 0:
            m //= pp
            k *= p
        p += 1 if p == 2 else 2
    r = math.isqrt(m)
    if r * r == m:
        k *= r
        m = 1
    return k, m


def sqrt_exact(x):
    """Exact square root of a non-negative rational, as Fraction or QuadSurd."""
    x = _frac(x)
    if x < 0:
        raise ValueError("square root of a negative rational")
    if x == 0:
        return Fraction(0)
    p, q = x.numerator, x.denominator
    k, m = _split_square(p * q)
    if m == 1:
        return Fraction(k, q)
    return QuadSurd(0, Fraction(k, q), m)


def sqrt_any(x):
    """Exact square root when x is rational, float square root otherwise."""
    if isinstance(x, (int, Fraction)):
        return sqrt_exact(x)
    return math.sqrt(float(x))


def sign(x, tol: float = 0.0) -> int:
    if isinstance(x, QuadSurd):
        return x.sign()
    if isinstance(x, float):
        if abs(x) <= tol:
            return 0
        return 1 if x > 0 else -1
    return (x > 0) - (x < 0)


def is_exact(x) -> bool:
    return not isinstance(x, float)


def to_float(x) -> float:
    return float(x)


_TERM = re.compile(r"[+-]?[^+-]+")


def parse_scalar(s):
    """Parse an exact literal.

    Accepts ints, ``"p/q"``, decimal strings (expanded digit by digit, no float
    round-trip) and quadratic surds such as ``"1/3-2/9*sqrt(3)"``.
    """
    if isinstance(s, bool):
        raise ValidationError(f"not a number: {s!r}")
    if isinstance(s, (int, Fraction, QuadSurd)):
        return Fraction(s) if isinstance(s, int) else s
    if isinstance(s, float):
        # JSON floats should arrive as strings via parse_float; repr is the literal
        s = repr(s)
    if not isinstance(s, str):
        raise ValidationError(f"not a scalar literal: {s!r}")
    text = s.replace(" ", "")
    if not text:
        raise ValidationError("empty scalar literal")
    try:
        if "sqrt" not in text:
            return Fraction(text)
        total = Fraction(0)
        for term in _TERM.findall(text.replace("e-", "E_").replace("e+", "E^")):
            term = term.replace("E_", "e-").replace("E^", "e+")
            if "sqrt(" in term:
                coef, _, rest = term.partition("sqrt(")
                if not rest.endswith(")"):
                    raise ValueError(term)
                d = int(rest[:-1])
                coef = coef.rstrip("*")
                if coef in ("", "+"):
                    c = Fraction(1)
                elif coef == "-":
                    c = Fraction(-1)
                else:
                    c = Fraction(coef)
                total = total + c * sqrt_exact(d)
            else:
                total = total + Fraction(term)
        return total
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"malformed scalar literal {s!r}") from exc


def format_scalar(x):
    """Canonical string for exact scalars; floats pass through unchanged."""
    if isinstance(x, float):
        return x
    if isinstance(x, QuadSurd):
        tail = f"*sqrt({x.d})"
        if x.b == 1:
            b = "sqrt(" + str(x.d) + ")"
        elif x.b == -1:
            b = "-sqrt(" + str(x.d) + ")"
        else:
            b = f"{x.b}{tail}"
        if x.a == 0:
            return b
        return f"{x.a}{'' if b.startswith('-') else '+'}{b}"
    return str(Fraction(x))


class CNum:
    """Complex number whose real and imaginary parts are exact scalars."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re) if isinstance(re, int) else re
        self.im = Fraction(im) if isinstance(im, int) else im

    @staticmethod
    def of(x):
        if isinstance(x, CNum):
            return x
        if isinstance(x, complex):
            return CNum(x.real, x.imag)
        return CNum(x, 0)

    def __add__(self, o):
        o = CNum.of(o)
        return CNum(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = CNum.of(o)
        return CNum(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return CNum.of(o) - self

    def __neg__(self):
        return CNum(-self.re, -self.im)

    def __mul__(self, o):
        o = CNum.of(o)
        return CNum(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self):
        return CNum(self.re, -self.im)

    def abs2(self):
        return self.re * self.re + self.im * self.im

    def __truediv__(self, o):
        o = CNum.of(o)
        n = o.abs2()
        if sign(n) == 0:
            raise ZeroDivisionError("complex division by zero")
        p = self * o.conj()
        return CNum(p.re / n, p.im / n)

    def __rtruediv__(self, o):
        return CNum.of(o) / self

    def is_zero(self):
        return sign(self.re) == 0 and sign(self.im) == 0

    def __eq__(self, o):
        if isinstance(o, (CNum, int, Fraction, QuadSurd, float, complex)):
            d = self - CNum.of(o)
            return d.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"CNum({format_scalar(self.re)!r}, {format_scalar(self.im)!r})"


I = CNum(0, 1)


@dataclass(frozen=True)
class Mat2:
    """2x2 real matrix ``[[a11, a12], [a21, a22]]``."""

    a11: object
    a12: object
    a21: object
    a22: object

    @classmethod
    def of(cls, rows):
        (a, b), (c, d) = rows
        return cls(*(Fraction(x) if isinstance(x, int) else parse_scalar(x) if isinstance(x, str) else x
                     for x in (a, b, c, d)))

    @classmethod
    def parse(cls, rows):
        try:
            (a, b), (c, d) = rows
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"matrix must be a 2x2 array, got {rows!r}") from exc
        return cls(*(parse_scalar(x) for x in (a, b, c, d)))

    @classmethod
    def identity(cls):
        return cls.of([[1, 0], [0, 1]])

    @classmethod
    def zero(cls):
        return cls.of([[0, 0], [0, 0]])

    @classmethod
    def diag(cls, x, y):
        return cls.of([[x, 0], [0, y]])

    @classmethod
    def rotation(cls, s, t):
        """Rotation-scaling form ``[[s, -t], [t, s]]``."""
        return cls.of([[s, -t], [t, s]])

    @classmethod
    def from_columns(cls, v1, v2):
        return cls(v1[0], v2[0], v1[1], v2[1])

    def entries(self):
        return (self.a11, self.a12, self.a21, self.a22)

    def rows(self):
        return [[self.a11, self.a12], [self.a21, self.a22]]

    def map(self, f):
        return Mat2(*(f(x) for x in self.entries()))

    def __add__(self, o):
        return Mat2(*(x + y for x, y in zip(self.entries(), o.entries())))

    def __sub__(self, o):
        return Mat2(*(x - y for x, y in zip(self.entries(), o.entries())))

    def __neg__(self):
        return self.map(lambda x: -x)

    def __mul__(self, o):
        if isinstance(o, Mat2):
            return Mat2(
                self.a11 * o.a11 + self.a12 * o.a21,
                self.a11 * o.a12 + self.a12 * o.a22,
                self.a21 * o.a11 + self.a22 * o.a21,
                self.a21 * o.a12 + self.a22 * o.a22,
            )
        return self.map(lambda x: x * o)

    def __rmul__(self, o):
        return self.map(lambda x: o * x)

    def __matmul__(self, o):
        return self * o

    def apply(self, v):
        x, y = v
        return (self.a11 * x + self.a12 * y, self.a21 * x + self.a22 * y)

    def det(self):
        return self.a11 * self.a22 - self.a12 * self.a21

    def trace(self):
        return self.a11 + self.a22

    @property
    def T(self):
        return Mat2(self.a11, self.a21, self.a12, self.a22)

    def inv(self):
        d = self.det()
        if sign(d) == 0:
            raise ZeroDivisionError("singular matrix")
        return Mat2(self.a22 / d, -self.a12 / d, -self.a21 / d, self.a11 / d)

    def conj_by(self, S):
        """Return ``S^-1 @ self @ S``."""
        return S.inv() * self * S

    def is_zero(self):
        return all(sign(x) == 0 for x in self.entries())

    def is_scalar(self):
        return sign(self.a12) == 0 and sign(self.a21) == 0 and sign(self.a11 - self.a22) == 0

    def is_exact(self):
        return all(is_exact(x) for x in self.entries())

    def to_float(self):
        return Mat2(*(float(x) for x in self.entries()))

    def to_numpy(self):
        import numpy as np

        return np.array([[float(self.a11), float(self.a12)], [float(self.a21), float(self.a22)]])

    def max_abs_diff(self, o):
        return max(abs(float(x) - float(y)) for x, y in zip(self.entries(), o.entries()))

    def to_json(self):
        return [[format_scalar(self.a11), format_scalar(self.a12)],
                [format_scalar(self.a21), format_scalar(self.a22)]]

    def __eq__(self, o):
        if not isinstance(o, Mat2):
            return NotImplemented
        return all(sign(x - y) == 0 for x, y in zip(self.entries(), o.entries()))

    def __hash__(self):
        return hash(tuple(float(x) for x in self.entries()))

    def __repr__(self):
        return f"Mat2({self.to_json()})"


class SpectrumKind(str, enum.Enum):
    RealDistinct = "RealDistinct"
    RealRepeated = "RealRepeated"
    ComplexConjugate = "ComplexConjugate"


@dataclass(frozen=True)
class Spectrum:
    trace: object
    det: object
    discriminant: object
    kind: SpectrumKind

    def to_json(self):
        return {
            "trace": format_scalar(self.trace),
            "det": format_scalar(self.det),
            "discriminant": format_scalar(self.discriminant),
            "kind": self.kind.value,
        }


def eigen_spectrum(A: Mat2) -> Spectrum:
    tr, dt = A.trace(), A.det()
    disc = tr * tr - 4 * dt
    s = sign(disc)
    kind = (SpectrumKind.RealDistinct if s > 0 else
            SpectrumKind.RealRepeated if s == 0 else SpectrumKind.ComplexConjugate)
    return Spectrum(tr, dt, disc, kind)


def commutator(A: Mat2, B: Mat2) -> Mat2:
    return A * B - B * A


def commutator_det(A: Mat2, B: Mat2):
    return commutator(A, B).det()


def triple_trace_obstruction(A: Mat2, B: Mat2, C: Mat2):
    return (A * B * C - C * B * A).trace()


def is_totally_real_matrix(A: Mat2) -> bool:
    # det(A^2 + I) = 0  <=>  +-i is an eigenvalue  <=>  tr A = 0 and det A = 1
    return not (sign(A.trace()) == 0 and sign(A.det() - 1) == 0)


def pair_obstructed(A: Mat2) -> bool:
    """True iff R^2 u M(A) fails to be locally polynomially convex at 0.

    That happens exactly for a purely imaginary eigenvalue of modulus > 1,
    i.e. trace 0 and determinant > 1.
    """
    return sign(A.trace()) == 0 and sign(A.det() - 1) > 0


def real_eigenvalues(A: Mat2):
    """Real eigenvalues (larger first) in exact arithmetic when A is rational.

    Returns an empty tuple for complex spectra, a 1-tuple for repeated ones.
    """
    sp = eigen_spectrum(A)
    if sp.kind is SpectrumKind.ComplexConjugate:
        return ()
    if sp.kind is SpectrumKind.RealRepeated:
        return (sp.trace / 2,)
    r = sqrt_any(sp.discriminant)
    return ((sp.trace + r) / 2, (sp.trace - r) / 2)


def eigen_direction(A: Mat2, lam):
    """A nonzero vector spanning ker(A - lam I); assumes lam is an eigenvalue."""
    a, b, c, d = A.entries()
    if sign(b) != 0:
        return (b, lam - a)
    if sign(c) != 0:
        return (lam - d, c)
    # diagonal matrix
    if sign(a - lam) == 0:
        return (Fraction(1), Fraction(0))
    return (Fraction(0), Fraction(1))
