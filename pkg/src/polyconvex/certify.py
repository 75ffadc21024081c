"""Separation certificates for Convex verdicts.

Two kinds are produced.  A Kallin certificate records a quadratic polynomial
(``z^2 + w^2`` or ``z^2 - w^2``), its exact restriction to every plane, and a
grouping of the planes into target sets of C that meet only at 0.  A fiber
certificate records a common upper-triangular form; the projection ``w``
then has thin image and fibers that are unions of real lines.

Verification never trusts stored derived data: images are recomputed from
the canonical forms, which are recomputed from the source matrices.
"""

from __future__ import annotations

import enum
import hashlib
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .core import CNum, Mat2, format_scalar, pair_obstructed, parse_scalar, sign
from .errors import NotApplicable, NotTriangular, ValidationError
from .normalform import pairwise_reduce

__all__ = [
    "Poly", "QuadForm2C", "LinearForm2C", "Definiteness", "definiteness",
    "restrict_poly_to_plane", "Target", "PlaneImage", "KallinCertificate",
    "FiberCertificate", "Verification", "build_kallin", "verify_kallin",
    "build_fiber_certificate", "verify_fiber_certificate", "verify_certificate",
    "certificate_from_json", "certificate_id", "has_real_zero", "bounded_face_witness",
]

TOL = 1e-9


class Poly(str, enum.Enum):
    ZsqPlusWsq = "ZsqPlusWsq"
    ZsqMinusWsq = "ZsqMinusWsq"
    W = "W"
    Zsq = "Zsq"


@dataclass(frozen=True)
class QuadForm2C:
    """``cxx x^2 + cxy x y + cyy y^2`` with complex coefficients."""

    cxx: CNum
    cxy: CNum
    cyy: CNum

    def __call__(self, x, y):
        return self.cxx * (x * x) + self.cxy * (x * y) + self.cyy * (y * y)

    def real_part(self):
        return (self.cxx.re, self.cxy.re, self.cyy.re)

    def imag_part(self):
        return (self.cxx.im, self.cxy.im, self.cyy.im)

    def to_json(self):
        return {k: [format_scalar(c.re), format_scalar(c.im)]
                for k, c in (("xx", self.cxx), ("xy", self.cxy), ("yy", self.cyy))}

    @classmethod
    def from_json(cls, obj):
        return cls(*(CNum(_scalar(obj[k][0]), _scalar(obj[k][1])) for k in ("xx", "xy", "yy")))


@dataclass(frozen=True)
class LinearForm2C:
    cx: CNum
    cy: CNum

    def __call__(self, x, y):
        return self.cx * x + self.cy * y


def _plane_coords(A: Mat2 | None):
    # z = alpha x + beta y, w = gamma x + delta y on (A + iI)(x, y)
    if A is None:
        return CNum(1), CNum(0), CNum(0), CNum(1)
    return CNum(A.a11, 1), CNum(A.a12), CNum(A.a21), CNum(A.a22, 1)


def restrict_poly_to_plane(poly, A: Mat2 | None = None):
    """Exact coefficients of ``poly`` on M(A) (on R^2 when A is None)."""
    poly = Poly(poly)
    al, be, ga, de = _plane_coords(A)
    if poly is Poly.W:
        return LinearForm2C(ga, de)
    zz = (al * al, al * be * 2, be * be)
    if poly is Poly.Zsq:
        return QuadForm2C(*zz)
    ww = (ga * ga, ga * de * 2, de * de)
    if poly is Poly.ZsqPlusWsq:
        return QuadForm2C(*(p + q for p, q in zip(zz, ww)))
    if poly is Poly.ZsqMinusWsq:
        return QuadForm2C(*(p - q for p, q in zip(zz, ww)))
    raise ValidationError(f"unsupported polynomial {poly}")


class Definiteness(str, enum.Enum):
    PosDef = "PosDef"
    NegDef = "NegDef"
    Indefinite = "Indefinite"
    PosSemi = "PosSemi"
    NegSemi = "NegSemi"
    Zero = "Zero"


def definiteness(a, b, c, tol: float = TOL) -> Definiteness:
    """Classify ``a x^2 + b x y + c y^2`` by the signs of a, c and b^2 - 4ac."""
    sa, sc = sign(a, tol), sign(c, tol)
    sd = sign(b * b - 4 * a * c, tol * tol)
    if sd < 0:
        return Definiteness.PosDef if sa > 0 else Definiteness.NegDef
    if sd > 0:
        return Definiteness.Indefinite
    if sa == 0 and sc == 0 and sign(b, tol) == 0:
        return Definiteness.Zero
    return Definiteness.PosSemi if (sa > 0 or sc > 0) else Definiteness.NegSemi


_DEFINITE = (Definiteness.PosDef, Definiteness.NegDef)


def _is_zero_form(q, tol=TOL):
    return all(sign(x, tol) == 0 for x in q)


def has_real_zero(form: QuadForm2C, tol: float = TOL) -> bool:
    """True iff the complex form vanishes at some real (x, y) != 0."""
    r, i = form.real_part(), form.imag_part()
    if _is_zero_form(r, tol):
        return definiteness(*i, tol=tol) not in _DEFINITE
    if _is_zero_form(i, tol):
        return definiteness(*r, tol=tol) not in _DEFINITE
    (a1, b1, c1), (a2, b2, c2) = r, i
    ab, ac, bc = a1 * b2 - a2 * b1, a1 * c2 - a2 * c1, b1 * c2 - b2 * c1
    if all(sign(x, tol) == 0 for x in (ab, ac, bc)):
        return definiteness(*r, tol=tol) not in _DEFINITE
    # non-proportional real forms share a root iff the resultant vanishes,
    # and a shared factor is then necessarily real
    return sign(ac * ac - ab * bc, tol) == 0


# --- Kallin -----------------------------------------------------------------

@dataclass(frozen=True)
class Target:
    """A closed subset of C: a ray from 0, the real axis, or (C minus R) u {0}."""

    kind: str  # "ray" | "realLine" | "offReal"
    direction: tuple | None = None

    def to_json(self):
        out = {"kind": self.kind}
        if self.direction is not None:
            out["direction"] = [format_scalar(x) for x in self.direction]
        return out

    @classmethod
    def from_json(cls, obj):
        kind = obj.get("kind")
        if kind not in ("ray", "realLine", "offReal"):
            raise ValidationError(f"unknown target kind {kind!r}")
        d = obj.get("direction")
        return cls(kind, tuple(_scalar(x) for x in d) if d is not None else None)


@dataclass
class PlaneImage:
    index: int  # 0 is the base plane R^2
    source: Mat2 | None
    canonical: Mat2 | None
    image: QuadForm2C

    def to_json(self):
        return {
            "index": self.index,
            "source": None if self.source is None else self.source.to_json(),
            "canonical": None if self.canonical is None else self.canonical.to_json(),
            "image": self.image.to_json(),
        }


@dataclass
class KallinCertificate:
    polynomial: Poly
    conjugator: Mat2
    planes: list
    groups: list  # [(Target, tuple of plane indices)]
    zero_fiber: dict
    rule: str = ""

    def to_json(self):
        return {
            "type": "Kallin",
            "rule": self.rule,
            "polynomial": self.polynomial.value,
            "conjugator": self.conjugator.to_json(),
            "planes": [p.to_json() for p in self.planes],
            "groups": [{"target": t.to_json(), "planes": list(ix)} for t, ix in self.groups],
            "zeroFiber": dict(self.zero_fiber),
        }


@dataclass
class Verification:
    ok: bool
    reasons: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def _ray_of(form: QuadForm2C):
    # for forms c * q(x, y) with q positive definite the image is the ray through c
    return (form.cxx.re, form.cxx.im)


def _zero_fiber(planes, tol=TOL):
    hits = [p.index for p in planes if has_real_zero(p.image, tol)]
    if not hits:
        return {"kind": "trivial"}
    if len(hits) == 1:
        return {"kind": "linesInPlane", "plane": hits[0]}
    return {"kind": "unsupported", "planes": hits}


_ROT_RULES = {"Thm1b", "WeinstockPair"}
_THREE_RULES = {"Thm2i", "Thm2ii", "Thm3iSymmetric", "Thm3iMixed", "Thm3ii"}


def build_kallin(rule: str, sources, conj) -> KallinCertificate:
    """Certificate for a Convex verdict reached through a Kallin argument.

    ``sources`` are the family's matrices and ``conj`` the conjugation that
    produced the canonical forms used in the argument.
    """
    sources = list(sources)
    forms = list(conj.canonical_forms)
    if rule in _ROT_RULES:
        poly = Poly.ZsqPlusWsq
    elif rule in _THREE_RULES:
        if len(sources) != 2:
            raise NotApplicable("three-plane certificates need exactly two matrices")
        poly = Poly.ZsqMinusWsq if rule == "Thm2ii" else Poly.ZsqPlusWsq
    else:
        raise NotApplicable(f"no Kallin construction for rule {rule}")
    planes = [PlaneImage(0, None, None, restrict_poly_to_plane(poly, None))]
    for j, (A, C) in enumerate(zip(sources, forms), start=1):
        planes.append(PlaneImage(j, A, C, restrict_poly_to_plane(poly, C)))
    if rule in _ROT_RULES:
        groups = [(Target("ray", _ray_of(p.image)), (p.index,)) for p in planes]
    else:
        base = Target("realLine") if poly is Poly.ZsqMinusWsq else Target("ray", (Fraction(1), Fraction(0)))
        groups = [(base, (0,)), (Target("offReal"), (1, 2))]
    return KallinCertificate(poly, conj.conjugator, planes, groups, _zero_fiber(planes), rule)


def _in_target(form: QuadForm2C, t: Target):
    if t.kind == "realLine":
        return _is_zero_form(form.imag_part())
    if t.kind == "offReal":
        return definiteness(*form.imag_part()) in _DEFINITE
    u1, u2 = t.direction
    if sign(u1, TOL) == 0 and sign(u2, TOL) == 0:
        return False
    for c in (form.cxx, form.cxy, form.cyy):
        if sign(u1 * c.im - u2 * c.re, TOL) != 0:
            return False
    proj = tuple(u1 * c.re + u2 * c.im for c in (form.cxx, form.cxy, form.cyy))
    return definiteness(*proj) in (Definiteness.PosDef, Definiteness.PosSemi, Definiteness.Zero)


def _targets_disjoint(s: Target, t: Target):
    kinds = {s.kind, t.kind}
    if s.kind == t.kind and s.kind != "ray":
        return False
    if kinds == {"realLine", "offReal"}:
        return True
    if s.kind == "ray" and t.kind == "ray":
        (a, b), (c, d) = s.direction, t.direction
        return not (sign(a * d - b * c, TOL) == 0 and sign(a * c + b * d, TOL) > 0)
    ray = s if s.kind == "ray" else t
    other = t if ray is s else s
    real_ray = sign(ray.direction[1], TOL) == 0
    return real_ray if other.kind == "offReal" else not real_ray


def _conj_ok(source, canonical, S):
    try:
        expect = source.conj_by(S)
    except ValueError:
        expect = source.to_float().conj_by(S.to_float())
    if expect.is_exact() and canonical.is_exact():
        return expect == canonical
    scale = max(1.0, max(abs(float(x)) for x in expect.entries()))
    return expect.max_abs_diff(canonical) <= TOL * scale


def _pair_convex(i, j, by_index):
    A = by_index[i].source
    B = by_index[j].source
    if A is None or B is None:
        return not pair_obstructed(B if A is None else A)
    try:
        return not pair_obstructed(pairwise_reduce(A, B))
    except ValidationError:
        return False


def verify_kallin(c: KallinCertificate) -> Verification:
    reasons = []
    by_index = {p.index: p for p in c.planes}
    if len(by_index) != len(c.planes) or 0 not in by_index:
        return Verification(False, ["plane indices must be distinct and include the base 0"])
    S = c.conjugator
    if sign(S.det(), TOL) == 0:
        reasons.append("conjugator is singular")
    for p in c.planes:
        if p.index == 0:
            if p.source is not None or p.canonical is not None:
                reasons.append("base plane must carry no matrix")
            fresh = restrict_poly_to_plane(c.polynomial, None)
        else:
            if p.source is None or p.canonical is None:
                reasons.append(f"plane {p.index} lacks its matrices")
                continue
            if not _conj_ok(p.source, p.canonical, S):
                reasons.append(f"plane {p.index}: canonical form is not S^-1 A S")
            fresh = restrict_poly_to_plane(c.polynomial, p.canonical)
        if not _forms_equal(fresh, p.image):
            reasons.append(f"plane {p.index}: stored image does not match the restriction")
    seen = [ix for _, g in c.groups for ix in g]
    if sorted(seen) != sorted(by_index):
        reasons.append("groups must partition the planes")
    for t, g in c.groups:
        for ix in g:
            if ix in by_index and not _in_target(by_index[ix].image, t):
                reasons.append(f"plane {ix}: image not contained in {t.kind} target")
        if len(g) > 2:
            reasons.append("a group may hold at most two planes")
        elif len(g) == 2 and all(ix in by_index for ix in g) and not _pair_convex(*g, by_index):
            reasons.append(f"planes {g} do not form a convex pair")
    ts = [t for t, _ in c.groups]
    if len(ts) > 2 and any(t.kind != "ray" for t in ts):
        reasons.append("more than two groups requires ray targets only")
    for (s, gs), (t, gt) in itertools.combinations(c.groups, 2):
        if not _targets_disjoint(s, t):
            reasons.append(f"targets of groups {list(gs)} and {list(gt)} meet outside 0")
    zf = _zero_fiber(c.planes)
    if zf["kind"] == "unsupported":
        reasons.append(f"zero fiber meets several planes {zf['planes']}")
    elif zf != c.zero_fiber:
        reasons.append(f"declared zero fiber {c.zero_fiber} differs from derived {zf}")
    return Verification(not reasons, reasons)


def _forms_equal(f: QuadForm2C, g: QuadForm2C):
    for a, b in zip((f.cxx, f.cxy, f.cyy), (g.cxx, g.cxy, g.cyy)):
        for x, y in ((a.re, b.re), (a.im, b.im)):
            try:
                if sign(x - y, TOL) != 0:
                    return False
            except ValueError:
                return False
    return True


# --- fibers of w ------------------------------------------------------------

@dataclass
class FiberCertificate:
    sources: list
    conjugator: Mat2
    triangular_forms: list
    directions: list  # nu_j; the image of plane j under w is the line (nu_j + i) R

    def to_json(self):
        return {
            "type": "Fiber",
            "sources": [A.to_json() for A in self.sources],
            "conjugator": self.conjugator.to_json(),
            "triangularForms": [T.to_json() for T in self.triangular_forms],
            "directions": [[format_scalar(nu), "1"] for nu in self.directions],
        }


def bounded_face_witness(points):
    """Three lines of an arrangement that enclose a bounded face, or None.

    Lines with direction ``mu + i`` through the real point ``a * y0`` are
    encoded as points (mu, a); three such lines bound a triangle iff their
    mu values differ pairwise and the points are not collinear.
    """
    uniq = []
    for k, (mu, a) in points:
        if not any(sign(mu - m, TOL) == 0 and sign(a - b, TOL) == 0 for _, (m, b) in uniq):
            uniq.append((k, (mu, a)))
    for (i, (m1, a1)), (j, (m2, a2)), (k, (m3, a3)) in itertools.combinations(uniq, 3):
        if sign(m1 - m2, TOL) == 0 or sign(m1 - m3, TOL) == 0 or sign(m2 - m3, TOL) == 0:
            continue
        if sign((m2 - m1) * (a3 - a1) - (m3 - m1) * (a2 - a1), TOL) != 0:
            return (i, j, k)
    return None


def fiber_obstruction(forms):
    """Planes whose common fibers of w contain a bounded face (1-based), or None."""
    groups = []
    for j, T in enumerate(forms, start=1):
        for g in groups:
            if sign(g[0] - T.a22, TOL) == 0:
                g[1].append((j, (T.a11, T.a12)))
                break
        else:
            groups.append((T.a22, [(j, (T.a11, T.a12))]))
    for nu, pts in groups:
        w = bounded_face_witness(pts)
        if w is not None:
            return nu, w
    return None


def build_fiber_certificate(sources, conj) -> FiberCertificate:
    forms = list(conj.canonical_forms)
    for T in forms:
        if sign(T.a21, TOL) != 0:
            raise NotTriangular("canonical form is not upper triangular")
    return FiberCertificate(list(sources), conj.conjugator, forms, [T.a22 for T in forms])


def verify_fiber_certificate(c: FiberCertificate) -> Verification:
    reasons = []
    if not (len(c.sources) == len(c.triangular_forms) == len(c.directions)):
        return Verification(False, ["length mismatch between sources, forms and directions"])
    if sign(c.conjugator.det(), TOL) == 0:
        return Verification(False, ["conjugator is singular"])
    for j, (A, T, nu) in enumerate(zip(c.sources, c.triangular_forms, c.directions), start=1):
        exact = T.is_exact()
        if (sign(T.a21) != 0) if exact else abs(float(T.a21)) > TOL:
            reasons.append(f"plane {j}: lower-left entry is not zero")
        if not _conj_ok(A, T, c.conjugator):
            reasons.append(f"plane {j}: triangular form is not S^-1 A S")
        if sign(nu - T.a22, TOL) != 0:
            reasons.append(f"plane {j}: declared direction differs from the (2,2) entry")
    if not reasons:
        obs = fiber_obstruction(c.triangular_forms)
        if obs is not None:
            reasons.append(f"fibers over nu={format_scalar(obs[0])} bound a face (planes {list(obs[1])})")
    return Verification(not reasons, reasons)


# --- JSON -------------------------------------------------------------------

def _scalar(x):
    if isinstance(x, float):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    return parse_scalar(x)


def _mat(rows):
    if rows is None:
        return None
    try:
        (a, b), (c, d) = rows
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad matrix {rows!r}") from exc
    return Mat2(*(_scalar(x) for x in (a, b, c, d)))


def certificate_from_json(obj):
    if not isinstance(obj, dict):
        raise ValidationError("certificate must be a JSON object")
    kind = obj.get("type")
    try:
        if kind == "Kallin":
            planes = [PlaneImage(int(p["index"]), _mat(p.get("source")), _mat(p.get("canonical")),
                                 QuadForm2C.from_json(p["image"])) for p in obj["planes"]]
            groups = [(Target.from_json(g["target"]), tuple(int(i) for i in g["planes"]))
                      for g in obj["groups"]]
            return KallinCertificate(Poly(obj["polynomial"]), _mat(obj["conjugator"]), planes,
                                     groups, dict(obj["zeroFiber"]), obj.get("rule", ""))
        if kind == "Fiber":
            return FiberCertificate([_mat(m) for m in obj["sources"]], _mat(obj["conjugator"]),
                                    [_mat(m) for m in obj["triangularForms"]],
                                    [_scalar(d[0]) for d in obj["directions"]])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"malformed certificate: {exc}") from exc
    raise ValidationError(f"unknown certificate type {kind!r}")


def verify_certificate(c) -> Verification:
    if isinstance(c, KallinCertificate):
        return verify_kallin(c)
    if isinstance(c, FiberCertificate):
        return verify_fiber_certificate(c)
    raise ValidationError("not a certificate")


def certificate_id(c) -> str:
    blob = json.dumps(c.to_json(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]
