"""Totally-real planes in C^2 and the Weinstock normal form.

A plane is given either as a real span of two vectors of C^2, as a graph
``w = a z + b conj(z)``, or directly as ``M(A) = (A + iI) R^2`` for a real 2x2
matrix A.  A family in Weinstock form is the base plane R^2 together with
matrices A_1..A_N.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import CNum, Mat2, format_scalar, is_totally_real_matrix, parse_scalar, sign
from .errors import (
    DegeneratePlane, EmptyFamily, NotTotallyReal, NotTransverseToBase, SingularT,
    ValidationError,
)

__all__ = [
    "PlaneSpan", "GraphPlane", "WeinstockFamily", "is_totally_real_span", "transversal",
    "to_weinstock_form", "apply_real_conjugation", "graph_to_span", "span_of_matrix",
    "same_real_plane", "family_from_json", "plane_from_json", "real_rank", "map_span",
]


@dataclass(frozen=True)
class PlaneSpan:
    """Real span of v1, v2 in C^2; each vector is a pair of :class:`CNum`."""

    v1: tuple
    v2: tuple

    @classmethod
    def of(cls, v1, v2):
        return cls(tuple(CNum.of(x) for x in v1), tuple(CNum.of(x) for x in v2))

    def real_rows(self):
        """The spanning vectors as real 4-vectors (Re z, Im z, Re w, Im w)."""
        return [[v[0].re, v[0].im, v[1].re, v[1].im] for v in (self.v1, self.v2)]

    def to_json(self):
        return {"span": [[format_scalar(x) for x in row] for row in self.real_rows()]}


@dataclass(frozen=True)
class GraphPlane:
    """The real plane ``{(z, a z + b conj(z)) : z in C}``."""

    a: CNum
    b: CNum

    def to_json(self):
        return {"graph": {"a": [format_scalar(self.a.re), format_scalar(self.a.im)],
                          "b": [format_scalar(self.b.re), format_scalar(self.b.im)]}}


@dataclass
class WeinstockFamily:
    """Base plane R^2 (implicit) plus planes M(A_j), j = 1..N."""

    matrices: list
    provenance: tuple | None = None  # C-linear change of coordinates, 4 CNum row-major
    labels: list = field(default_factory=list)

    def __post_init__(self):
        for j, A in enumerate(self.matrices, start=1):
            if not is_totally_real_matrix(A):
                raise NotTotallyReal(j)

    @property
    def N(self):
        return len(self.matrices)

    def to_json(self):
        out = {"planes": [{"matrix": A.to_json()} for A in self.matrices]}
        if self.provenance is not None:
            out["provenance"] = [[format_scalar(z.re), format_scalar(z.im)] for z in self.provenance]
        return out


def _cdet(m):
    a, b, c, d = m
    return a * d - b * c


def _cinv(m):
    a, b, c, d = m
    det = _cdet(m)
    if det.is_zero():
        raise ZeroDivisionError
    return (d / det, -b / det, -c / det, a / det)


def _cmul(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _span_matrix(p: PlaneSpan):
    # columns v1, v2
    return (p.v1[0], p.v2[0], p.v1[1], p.v2[1])


def is_totally_real_span(p: PlaneSpan) -> bool:
    """True iff v1, v2 are independent over C (the span contains no complex line)."""
    return not _cdet(_span_matrix(p)).is_zero()


def transversal(A: Mat2, B: Mat2) -> bool:
    """True iff M(A) and M(B) meet only at the origin."""
    return sign((A - B).det()) != 0


def graph_to_span(g: GraphPlane) -> PlaneSpan:
    i = CNum(0, 1)
    return PlaneSpan((CNum(1), g.a + g.b), (i, i * (g.a - g.b)))


def span_of_matrix(A: Mat2) -> PlaneSpan:
    """Columns of A + iI."""
    return PlaneSpan((CNum(A.a11, 1), CNum(A.a21, 0)), (CNum(A.a12, 0), CNum(A.a22, 1)))


def to_weinstock_form(planes, base_index: int = 0) -> WeinstockFamily:
    """Change coordinates so that ``planes[base_index]`` becomes R^2.

    The C-linear map is the inverse of the matrix whose columns span the base
    plane; each other plane with mapped spanning matrix W becomes M(A) with
    ``A = Re(W) Im(W)^-1``.
    """
    planes = [graph_to_span(p) if isinstance(p, GraphPlane) else p for p in planes]
    if not 0 <= base_index < len(planes):
        raise ValidationError(f"base index {base_index} out of range")
    for j, p in enumerate(planes):
        if not is_totally_real_span(p):
            raise NotTotallyReal(j)
    change = _cinv(_span_matrix(planes[base_index]))
    mats = []
    labels = []
    for j, p in enumerate(planes):
        if j == base_index:
            continue
        W = _cmul(change, _span_matrix(p))
        re = Mat2(*(z.re for z in W))
        im = Mat2(*(z.im for z in W))
        if sign(im.det()) == 0:
            raise NotTransverseToBase(j)
        mats.append(re * im.inv())
        labels.append(j)
    return WeinstockFamily(mats, provenance=change, labels=labels)


def apply_real_conjugation(f: WeinstockFamily, T: Mat2) -> WeinstockFamily:
    """Image of the family under the real linear map T: each A_j becomes T A_j T^-1."""
    if sign(T.det()) == 0:
        raise SingularT("conjugating matrix is singular")
    Ti = T.inv()
    return WeinstockFamily([T * A * Ti for A in f.matrices], labels=list(f.labels))


def real_rank(rows) -> int:
    """Exact rank of a list of real row vectors (Gaussian elimination)."""
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if sign(m[r][c]) != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][c]
        for r in range(len(m)):
            if r != rank and sign(m[r][c]) != 0:
                f = m[r][c] / p
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def same_real_plane(p: PlaneSpan, q: PlaneSpan) -> bool:
    return real_rank(p.real_rows() + q.real_rows()) == 2


def map_span(change, p: PlaneSpan) -> PlaneSpan:
    a, b, c, d = change
    return PlaneSpan(*[(a * v[0] + b * v[1], c * v[0] + d * v[1]) for v in (p.v1, p.v2)])


# --- JSON -------------------------------------------------------------------

_PLANE_KEYS = {"matrix", "graph", "span"}


def _complex_pair(x):
    if not isinstance(x, (list, tuple)) or len(x) != 2:
        raise ValidationError(f"complex number must be [re, im], got {x!r}")
    return CNum(parse_scalar(x[0]), parse_scalar(x[1]))


def plane_from_json(obj):
    """Decode one plane object into a :class:`Mat2`, :class:`GraphPlane` or :class:`PlaneSpan`."""
    if not isinstance(obj, dict) or len(obj) != 1 or not set(obj) <= _PLANE_KEYS:
        raise ValidationError(f"plane object must have exactly one of {sorted(_PLANE_KEYS)}: {obj!r}")
    (kind, val), = obj.items()
    if kind == "matrix":
        return Mat2.parse(val)
    if kind == "graph":
        if not isinstance(val, dict) or set(val) != {"a", "b"}:
            raise ValidationError("graph plane needs exactly keys 'a' and 'b'")
        return GraphPlane(_complex_pair(val["a"]), _complex_pair(val["b"]))
    if not isinstance(val, (list, tuple)) or len(val) != 2 or any(len(v) != 4 for v in val):
        raise ValidationError("span must be two vectors of 4 reals (Re z, Im z, Re w, Im w)")
    vecs = []
    for v in val:
        r = [parse_scalar(x) for x in v]
        vecs.append((CNum(r[0], r[1]), CNum(r[2], r[3])))
    return PlaneSpan(*vecs)


def family_from_json(obj) -> WeinstockFamily:
    """Decode a family.

    Accepted shapes: a single plane object, a list of plane objects, or
    ``{"planes": [...], "baseIndex": k}``.  When every plane is a matrix the
    base plane R^2 is implicit; otherwise the list holds all planes including
    the base, which is converted to R^2.
    """
    base_index = 0
    if isinstance(obj, dict) and "planes" in obj:
        # "epsilon" is carried by generated families and ignored here
        extra = set(obj) - {"planes", "baseIndex", "provenance", "epsilon"}
        if extra:
            raise ValidationError(f"unknown family fields: {sorted(extra)}")
        base_index = obj.get("baseIndex", 0)
        if not isinstance(base_index, int):
            raise ValidationError("baseIndex must be an integer")
        items = obj["planes"]
    elif isinstance(obj, dict):
        items = [obj]
    else:
        items = obj
    if not isinstance(items, list) or not items:
        raise EmptyFamily("family has no planes")
    decoded = [plane_from_json(p) for p in items]
    if all(isinstance(p, Mat2) for p in decoded):
        for j, A in enumerate(decoded, start=1):
            if not is_totally_real_matrix(A):
                raise NotTotallyReal(j)
        return WeinstockFamily(decoded, labels=list(range(1, len(decoded) + 1)))
    spans = [span_of_matrix(p) if isinstance(p, Mat2) else p for p in decoded]
    if len(spans) < 2:
        raise DegeneratePlane("need the base plane and at least one more plane")
    return to_weinstock_form(spans, base_index)

