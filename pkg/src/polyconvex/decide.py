"""Decision rules for unions of totally-real planes through the origin.

Every predicate is a sign test on exact functions of the input matrices
(traces, determinants, commutator determinants), so verdicts never depend on
the floating-point conjugators used to build certificates.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

from .certify import (
    build_fiber_certificate, build_kallin, certificate_id, fiber_obstruction,
)
from .core import (
    Mat2, SpectrumKind, commutator_det, eigen_spectrum, format_scalar,
    is_totally_real_matrix, pair_obstructed, sign, triple_trace_obstruction,
)
from .errors import (
    DegeneratePlane, NotApplicable, NotTransverse, OutsideOmega,
    PairwiseHypothesisFails, RealDistinctSpectrum, ZeroVector,
)
from .normalform import (
    pairwise_reduce, reduced_length, simultaneous_rotation_form,
    simultaneous_triangularize, three_plane_normal_form,
)
from .planes import WeinstockFamily

__all__ = [
    "Outcome", "Rule", "OmegaRegion", "OmegaClass", "VVector", "Verdict",
    "weinstock_pair", "pairwise_verdicts", "v_vector", "positively_colinear",
    "condition_two", "theorem1_decide", "theorem2_decide", "classify_omega",
    "theorem3_decide", "decide",
]


class Outcome(str, enum.Enum):
    Convex = "Convex"
    NotConvex = "NotConvex"
    Undecided = "Undecided"


class Rule(str, enum.Enum):
    WeinstockPair = "WeinstockPair"
    Thm1a = "Thm1a"
    Thm1b = "Thm1b"
    Thm2i = "Thm2i"
    Thm2ii = "Thm2ii"
    Thm3iCommuting = "Thm3iCommuting"
    Thm3iSymmetric = "Thm3iSymmetric"
    Thm3iMixed = "Thm3iMixed"
    Thm3ii = "Thm3ii"
    NoRuleApplies = "NoRuleApplies"


class OmegaRegion(str, enum.Enum):
    OmegaStar = "OmegaStar"
    OmegaMinusStar = "OmegaMinusStar"
    OmegaBoundaryOfStar = "OmegaBoundaryOfStar"
    OutsideOmega = "OutsideOmega"


@dataclass(frozen=True)
class OmegaClass:
    region: OmegaRegion
    case: str = ""  # "i" or "ii"
    shape: str = ""
    predicates: tuple = ()  # (name, exact value) pairs that must be > 0

    def to_json(self):
        out = {"region": self.region.value}
        if self.case:
            out["case"] = self.case
            out["shape"] = self.shape
            out["predicates"] = {k: format_scalar(v) for k, v in self.predicates}
        return out


@dataclass(frozen=True)
class VVector:
    first: object
    second: object

    def to_json(self):
        return [format_scalar(self.first), format_scalar(self.second)]


def _check(name, passed, detail=""):
    return {"check": name, "passed": passed, "detail": detail}


@dataclass
class Verdict:
    outcome: Outcome
    rule: Rule
    witness: dict | None = None
    certificate: object = None
    trace: list = field(default_factory=list)
    omega: OmegaClass | None = None

    @property
    def certificate_id(self):
        return None if self.certificate is None else certificate_id(self.certificate)

    def to_json(self):
        out = {"outcome": self.outcome.value, "rule": self.rule.value, "trace": list(self.trace)}
        if self.witness is not None:
            out["witness"] = _jsonify(self.witness)
        if self.certificate is not None:
            out["certificateId"] = self.certificate_id
        if self.omega is not None:
            out["omega"] = self.omega.to_json()
        return out


def _jsonify(x):
    if isinstance(x, dict):
        return {k: _jsonify(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonify(v) for v in x]
    if isinstance(x, (Mat2, VVector)):
        return x.to_json()
    if isinstance(x, (str, bool, int)) or x is None:
        return x
    return format_scalar(x)


# --- pairs ------------------------------------------------------------------

def _pair_certificate(A: Mat2):
    if eigen_spectrum(A).kind is SpectrumKind.ComplexConjugate:
        return build_kallin("WeinstockPair", [A], simultaneous_rotation_form([A]))
    return build_fiber_certificate([A], simultaneous_triangularize([A]))


def weinstock_pair(A: Mat2) -> Verdict:
    """R^2 u M(A) is not convex exactly when A has eigenvalues +-i r with r > 1."""
    if not is_totally_real_matrix(A):
        raise DegeneratePlane("M(A) is not totally real")
    if pair_obstructed(A):
        return Verdict(Outcome.NotConvex, Rule.WeinstockPair, {"matrix": A},
                       trace=[_check("trace 0 and det > 1", False, "purely imaginary eigenvalues of modulus > 1")])
    return Verdict(Outcome.Convex, Rule.WeinstockPair, certificate=_pair_certificate(A),
                   trace=[_check("trace 0 and det > 1", True, "no purely imaginary eigenvalue of modulus > 1")])


def pairwise_verdicts(f: WeinstockFamily):
    """Verdicts for P0 u Pj and Pj u Pk; each carries ``witness['pair']``."""
    out = []
    for j, A in enumerate(f.matrices, start=1):
        v = weinstock_pair(A)
        v.witness = dict(v.witness or {}, pair=[0, j])
        out.append(v)
    for (j, A), (k, B) in itertools.combinations(enumerate(f.matrices, start=1), 2):
        try:
            Bm = pairwise_reduce(A, B)
        except NotTransverse:
            out.append(Verdict(Outcome.Undecided, Rule.NoRuleApplies, {"pair": [j, k]},
                               trace=[_check(f"P{j} and P{k} transverse", False, "det(Aj - Ak) = 0")]))
            continue
        v = weinstock_pair(Bm)
        v.witness = dict(v.witness or {}, pair=[j, k])
        if v.outcome is Outcome.NotConvex:
            v.witness["reduced"] = Bm
        out.append(v)
    return out


# --- Theorem 1 --------------------------------------------------------------

def v_vector(A: Mat2) -> VVector:
    if eigen_spectrum(A).kind is not SpectrumKind.ComplexConjugate and not A.is_scalar():
        raise RealDistinctSpectrum("V-vector needs a non-real spectrum or a scalar matrix")
    return VVector(A.det() - 1, A.trace())


def positively_colinear(V: VVector, W: VVector) -> bool:
    if sign(V.first) == 0 and sign(V.second) == 0 or sign(W.first) == 0 and sign(W.second) == 0:
        raise ZeroVector("zero V-vector")
    cross = V.first * W.second - V.second * W.first
    dot = V.first * W.first + V.second * W.second
    return sign(cross) == 0 and sign(dot) > 0


def condition_two(As):
    """Commutator determinants vanish pairwise, plus the triple trace at reduced length 3."""
    trace = []
    ok = True
    for (j, A), (k, B) in itertools.combinations(enumerate(As, start=1), 2):
        if sign(commutator_det(A, B)) != 0:
            trace.append(_check(f"det[A{j},A{k}] = 0", False))
            ok = False
    if ok:
        trace.append(_check("pairwise commutator determinants vanish", True))
    rep = reduced_length(As)
    trace.append(_check("reduced length", True, f"{rep.reduced_length} via {list(rep.maximal_reduction)}"))
    if ok and rep.reduced_length == 3:
        a, b, c = (As[j - 1] for j in rep.maximal_reduction)
        t = triple_trace_obstruction(a, b, c)
        passed = sign(t) == 0
        trace.append(_check("Tr(ABC - CBA) = 0 on the maximal reduction", passed, format_scalar(t)))
        ok = ok and passed
    return ok, trace


def theorem1_decide(f: WeinstockFamily) -> Verdict:
    As = list(f.matrices)
    for j, k in itertools.combinations(range(len(As)), 2):
        if As[j] == As[k]:
            raise DegeneratePlane(f"planes {j + 1} and {k + 1} coincide")
    ok, trace = condition_two(As)
    if not ok:
        return Verdict(Outcome.Undecided, Rule.NoRuleApplies, trace=trace)
    if all(sign(eigen_spectrum(A).discriminant) >= 0 for A in As):
        trace.append(_check("all spectra real", True))
        conj = simultaneous_triangularize(As)
        obs = fiber_obstruction(conj.canonical_forms)
        if obs is not None:
            nu, planes = obs
            trace.append(_check("fibers of w are polynomially convex", False,
                                f"lines from planes {list(planes)} bound a face"))
            return Verdict(Outcome.NotConvex, Rule.Thm1a, {"nu": nu, "planes": list(planes)}, trace=trace)
        trace.append(_check("fibers of w are polynomially convex", True))
        return Verdict(Outcome.Convex, Rule.Thm1a, certificate=build_fiber_certificate(As, conj), trace=trace)
    trace.append(_check("all spectra real", False, "rotation-form path"))
    conj = simultaneous_rotation_form(As)
    vs = [VVector(1, 0)] + [v_vector(A) for A in As]
    for l, m in itertools.combinations(range(len(vs)), 2):
        if positively_colinear(vs[l], vs[m]):
            trace.append(_check("no positively colinear V pair", False, f"V{l} ~ V{m}"))
            return Verdict(Outcome.NotConvex, Rule.Thm1b,
                           {"pair": [l, m], "vectors": [vs[l], vs[m]]}, trace=trace)
    trace.append(_check("no positively colinear V pair", True))
    return Verdict(Outcome.Convex, Rule.Thm1b, certificate=build_kallin("Thm1b", As, conj), trace=trace)


# --- three planes -----------------------------------------------------------

def _require_pairs(f: WeinstockFamily):
    if f.N != 2:
        raise NotApplicable("rule applies to two matrices only")
    for v in pairwise_verdicts(f):
        if v.outcome is not Outcome.Convex:
            raise PairwiseHypothesisFails(tuple(v.witness["pair"]))


def theorem2_decide(f: WeinstockFamily) -> Verdict:
    _require_pairs(f)
    A1, A2 = f.matrices
    c = sign(commutator_det(A1, A2))
    d1, d2 = sign(A1.det()), sign(A2.det())
    trace = [_check("pairwise unions convex", True),
             _check("signs of det[A1,A2], det A1, det A2", None, f"{c}, {d1}, {d2}")]
    for rule, s in ((Rule.Thm2i, 1), (Rule.Thm2ii, -1)):
        if c == s and d1 == s and d2 == s:
            trace.append(_check(f"sign conditions ({rule.value})", True))
            conj = three_plane_normal_form(A1, A2)
            return Verdict(Outcome.Convex, rule, certificate=build_kallin(rule.value, [A1, A2], conj),
                           trace=trace)
    trace.append(_check("sign conditions", False))
    return Verdict(Outcome.Undecided, Rule.NoRuleApplies, trace=trace)


def classify_omega(A1: Mat2, A2: Mat2) -> OmegaClass:
    sp = eigen_spectrum(A1)
    if sp.kind is SpectrumKind.RealRepeated:
        return OmegaClass(OmegaRegion.OutsideOmega)
    comm = commutator_det(A1, A2)
    if sp.kind is SpectrumKind.RealDistinct:
        case = "i"
        sc = sign(comm)
        if sc == 0:
            return OmegaClass(OmegaRegion.OmegaStar, case, "Commuting", ())
        # bc = comm / disc; det A2 = s21 s22 - bc in the normalized coordinates
        second = A2.det() if sc > 0 else A2.det() + comm / sp.discriminant
        shape = "DiagonalPlusSymmetric" if sc > 0 else "DiagonalPlusMixed"
        preds = (("detSym1", 4 * A1.det()), ("detSym2", 4 * second))
    else:
        case, shape = "ii", "RotationPlusMixed"
        tr2 = A2.trace()
        preds = (("detSym1", sp.trace * sp.trace), ("detSym2", tr2 * tr2 - 4 * comm / sp.discriminant))
    signs = [sign(v) for _, v in preds]
    if all(s > 0 for s in signs):
        region = OmegaRegion.OmegaStar
    elif all(s >= 0 for s in signs):
        region = OmegaRegion.OmegaBoundaryOfStar
    else:
        region = OmegaRegion.OmegaMinusStar
    return OmegaClass(region, case, shape, preds)


_SHAPE_RULE = {
    ("i", "Commuting"): Rule.Thm3iCommuting,
    ("i", "DiagonalPlusSymmetric"): Rule.Thm3iSymmetric,
    ("i", "DiagonalPlusMixed"): Rule.Thm3iMixed,
    ("ii", "RotationPlusMixed"): Rule.Thm3ii,
}


def theorem3_decide(f: WeinstockFamily) -> Verdict:
    _require_pairs(f)
    A1, A2 = f.matrices
    trace = [_check("pairwise unions convex", True)]
    first = None
    for order in ((1, 2), (2, 1)):
        B1, B2 = (A1, A2) if order == (1, 2) else (A2, A1)
        om = classify_omega(B1, B2)
        if first is None:
            first = om
        tag = f"order {order}"
        if om.region is OmegaRegion.OutsideOmega:
            trace.append(_check(f"{tag}: pair in Omega", False, "first matrix has a repeated eigenvalue"))
            continue
        trace.append(_check(f"{tag}: pair in Omega", True, f"case {om.case}, shape {om.shape} from sign(det[A1,A2])"))
        for name, v in om.predicates:
            trace.append(_check(f"{tag}: {name} > 0", sign(v) > 0, format_scalar(v)))
        if om.region is not OmegaRegion.OmegaStar:
            continue
        rule = _SHAPE_RULE[(om.case, om.shape)]
        if rule is Rule.Thm3iCommuting:
            # commuting real pairs go through the fiber check, which can still fail
            t1 = theorem1_decide(WeinstockFamily([B1, B2]))
            trace.extend(t1.trace)
            if t1.outcome is not Outcome.Convex:
                t1.trace = trace
                return t1
            cert = t1.certificate
        else:
            cert = build_kallin(rule.value, [B1, B2], three_plane_normal_form(B1, B2))
        return Verdict(Outcome.Convex, rule, witness={"order": list(order)} if order != (1, 2) else None,
                       certificate=cert, trace=trace, omega=om)
    if first.region is OmegaRegion.OutsideOmega and classify_omega(A2, A1).region is OmegaRegion.OutsideOmega:
        raise OutsideOmega("neither matrix has two distinct or non-real eigenvalues")
    return Verdict(Outcome.Undecided, Rule.NoRuleApplies, trace=trace, omega=first)


# --- orchestration ----------------------------------------------------------

def _dedupe(f: WeinstockFamily):
    keep = []
    for A in f.matrices:
        if not any(A == B for B in keep):
            keep.append(A)
    return keep


def decide(f: WeinstockFamily) -> Verdict:
    """Run the pairwise test, then Theorem 1, then (two matrices) Theorems 2 and 3."""
    trace = []
    mats = _dedupe(f)
    if len(mats) != f.N:
        trace.append(_check("distinct planes", False, f"{f.N - len(mats)} duplicate plane(s) dropped"))
        f = WeinstockFamily(mats)
    if f.N == 0:
        raise DegeneratePlane("family has no plane besides the base")
    pv = pairwise_verdicts(f)
    for v in pv:
        if v.outcome is Outcome.NotConvex:
            trace.append(_check("pairwise unions convex", False, f"pair {v.witness['pair']}"))
            return Verdict(Outcome.NotConvex, Rule.WeinstockPair, v.witness, trace=trace + v.trace)
    if f.N == 1:
        v = pv[0]
        v.trace = trace + v.trace
        v.witness = None
        return v
    undecided = [v.witness["pair"] for v in pv if v.outcome is Outcome.Undecided]
    trace.append(_check("pairwise unions convex", not undecided,
                        f"undecided pairs {undecided}" if undecided else ""))
    t1 = theorem1_decide(f)
    trace.extend(t1.trace)
    if t1.outcome is not Outcome.Undecided:
        t1.trace = trace
        return t1
    omega = None
    if f.N == 2 and not undecided:
        t2 = theorem2_decide(f)
        trace.extend(t2.trace[1:])
        if t2.outcome is Outcome.Convex:
            t2.trace = trace
            return t2
        try:
            t3 = theorem3_decide(f)
        except OutsideOmega:
            trace.append(_check("pair in Omega", False, "both orders outside Omega"))
            omega = OmegaClass(OmegaRegion.OutsideOmega)
        else:
            trace.extend(t3.trace[1:])
            omega = t3.omega
            if t3.outcome is Outcome.Convex:
                t3.trace = trace
                return t3
    if f.N == 2 and omega is None:
        omega = classify_omega(*f.matrices)
    return Verdict(Outcome.Undecided, Rule.NoRuleApplies, trace=trace, omega=omega)
