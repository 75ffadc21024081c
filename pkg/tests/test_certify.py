import copy
import json
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import matrices, rational_in
from polyconvex.certify import (
    Definiteness, FiberCertificate, Poly, build_fiber_certificate, certificate_from_json,
    certificate_id, definiteness, has_real_zero, restrict_poly_to_plane, verify_certificate,
    verify_fiber_certificate, verify_kallin,
)
from polyconvex.core import CNum, Mat2
from polyconvex.decide import Outcome, decide, theorem1_decide, theorem2_decide, theorem3_decide
from polyconvex.errors import NotTriangular, ValidationError
from polyconvex.normalform import simultaneous_triangularize
from polyconvex.planes import WeinstockFamily

M = Mat2.of
W = lambda *ms: WeinstockFamily([M(m) for m in ms])  # noqa: E731


def cert_json(v):
    return copy.deepcopy(v.certificate.to_json())


def reject(obj):
    return not verify_certificate(certificate_from_json(obj))


class TestRestriction:
    def test_rotation_form(self):
        s, t = F(2), F(3)
        q = restrict_poly_to_plane(Poly.ZsqPlusWsq, Mat2(s, -t, t, s))
        assert q.cxx == q.cyy == CNum(s * s + t * t - 1, 2 * s)
        assert q.cxy == CNum(0)

    def test_base_plane(self):
        q = restrict_poly_to_plane(Poly.ZsqPlusWsq)
        assert (q.cxx, q.cxy, q.cyy) == (CNum(1), CNum(0), CNum(1))
        q = restrict_poly_to_plane(Poly.ZsqMinusWsq)
        assert (q.cxx, q.cxy, q.cyy) == (CNum(1), CNum(0), CNum(-1))

    def test_unsupported(self):
        with pytest.raises(ValueError):
            restrict_poly_to_plane("Cubic", Mat2.zero())

    @given(matrices(5, 3), rational_in(3, 4), rational_in(3, 4),
           st.sampled_from([Poly.ZsqPlusWsq, Poly.ZsqMinusWsq, Poly.Zsq]))
    def test_matches_direct_evaluation(self, A, x, y, poly):
        z = CNum(A.a11 * x + A.a12 * y, x)
        w = CNum(A.a21 * x + A.a22 * y, y)
        direct = {Poly.ZsqPlusWsq: z * z + w * w, Poly.ZsqMinusWsq: z * z - w * w, Poly.Zsq: z * z}[poly]
        assert restrict_poly_to_plane(poly, A)(x, y) == direct

    @given(matrices(5, 3), rational_in(3, 4), rational_in(3, 4))
    def test_linear_w(self, A, x, y):
        assert restrict_poly_to_plane(Poly.W, A)(x, y) == CNum(A.a21 * x + A.a22 * y, y)


class TestDefiniteness:
    def test_examples(self):
        assert definiteness(1, 0, 1) is Definiteness.PosDef
        assert definiteness(1, 0, -1) is Definiteness.Indefinite
        # 2 x^2 + 2 t xy + y^2 with t = 1: 4 - 8 < 0
        assert definiteness(2, 2, 1) is Definiteness.PosDef
        assert definiteness(0, 0, 0) is Definiteness.Zero
        assert definiteness(1, 2, 1) is Definiteness.PosSemi
        assert definiteness(-1, 0, 0) is Definiteness.NegSemi
        assert definiteness(-1, 1, -1) is Definiteness.NegDef

    @given(rational_in(5, 3), rational_in(5, 3), rational_in(5, 3))
    def test_matches_sampling(self, a, b, c):
        import math
        vals = [float(a) * math.cos(t) ** 2 + float(b) * math.cos(t) * math.sin(t) + float(c) * math.sin(t) ** 2
                for t in (k * math.pi / 720 for k in range(720))]
        lo, hi = min(vals), max(vals)
        d = definiteness(a, b, c)
        if d is Definiteness.PosDef:
            assert lo > 0
        elif d is Definiteness.NegDef:
            assert hi < 0
        elif d is Definiteness.Indefinite:
            assert lo < 0 < hi
        elif d is Definiteness.Zero:
            assert lo == hi == 0
        elif d is Definiteness.PosSemi:
            assert lo >= -1e-12 and hi > 0
        else:
            assert hi <= 1e-12 and lo < 0

    def test_real_zero(self):
        from polyconvex.certify import QuadForm2C
        assert has_real_zero(QuadForm2C(CNum(1), CNum(0), CNum(-1)))
        assert not has_real_zero(QuadForm2C(CNum(1, 1), CNum(0), CNum(1, 1)))


class TestKallin:
    def test_thm1b_rays(self):
        v = theorem1_decide(W([[1, -1], [1, 1]]))
        c = v.certificate
        assert c.polynomial is Poly.ZsqPlusWsq
        dirs = sorted(tuple(t.direction) for t, _ in c.groups)
        assert dirs == [(1, 0), (1, 2)]
        assert verify_kallin(c)

    def test_thm3ii_upper_half_plane(self):
        v = theorem3_decide(W([[1, -1], [1, 1]], [[2, -1], [1, 3]]))
        c = v.certificate
        img = next(p.image for p in c.planes if p.index == 2)
        assert definiteness(*img.imag_part()) is Definiteness.PosDef
        assert verify_kallin(c)

    def test_thm2ii_real_and_off_real(self):
        v = theorem2_decide(W([[1, 0], [0, -1]], [[1, -1], [1, -2]]))
        c = v.certificate
        assert c.polynomial is Poly.ZsqMinusWsq
        kinds = {t.kind: ix for t, ix in c.groups}
        assert kinds["realLine"] == (0,) and set(kinds["offReal"]) == {1, 2}
        assert verify_kallin(c)

    def test_overlapping_rays_rejected(self):
        obj = cert_json(theorem1_decide(W([[1, -1], [1, 1]])))
        for g in obj["groups"]:
            g["target"]["direction"] = ["1", "0"]
        assert reject(obj)

    def test_indefinite_imaginary_part_rejected(self):
        obj = cert_json(theorem3_decide(W([[1, -1], [1, 1]], [[2, -1], [1, 3]])))
        for p in obj["planes"]:
            if p["index"] == 2:
                p["image"]["yy"][1] = "-7"
        assert reject(obj)

    def test_json_roundtrip_and_id(self):
        v = decide(W([[1, -1], [1, 1]], [[2, -1], [1, 3]]))
        obj = v.certificate.to_json()
        back = certificate_from_json(json.loads(json.dumps(obj)))
        assert back.to_json() == obj
        assert certificate_id(back) == v.certificate_id

    def test_unknown_type(self):
        with pytest.raises(ValidationError):
            certificate_from_json({"type": "Bogus"})


class TestFiber:
    def test_single(self):
        v = theorem1_decide(W([[1, 0], [0, 2]]))
        c = v.certificate
        assert c.directions == [c.triangular_forms[0].a22]
        assert c.directions[0] in (1, 2)
        assert verify_fiber_certificate(v.certificate)

    def test_two_triangulars(self):
        As = [M([[1, 1], [0, 3]]), M([[2, 5], [0, 4]])]
        c = build_fiber_certificate(As, simultaneous_triangularize(As))
        assert sorted(c.directions) == [3, 4]
        assert verify_fiber_certificate(c)

    def test_not_triangular(self):
        class Fake:
            conjugator = Mat2.identity()
            canonical_forms = [M([[1, 0], [1, 1]])]
        with pytest.raises(NotTriangular):
            build_fiber_certificate([M([[1, 0], [1, 1]])], Fake)

    def test_lower_left_tamper(self):
        obj = cert_json(theorem1_decide(W([[1, 0], [0, 2]], [[3, 0], [0, 4]])))
        obj["triangularForms"][0][1][0] = "1"
        assert reject(obj)

    def test_bounded_face_rejected(self):
        As = [Mat2.zero(), M([[1, 1], [0, 0]]), M([[2, -1], [0, 0]])]
        c = FiberCertificate(As, Mat2.identity(), As, [0, 0, 0])
        assert not verify_fiber_certificate(c)


def _random_convex_verdicts(n, seed):
    from conftest import rand_mat
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        kind = rng.randrange(4)
        if kind == 0:
            ms = [M([[rng.randint(-4, 4), rng.randint(-4, 4)], [0, rng.randint(-4, 4)]]) for _ in range(rng.randint(1, 3))]
        elif kind == 1:
            ms = [Mat2.rotation(F(rng.randint(-4, 4)), F(rng.randint(1, 4)))]
            ms.append(ms[0] * rng.randint(-2, 2) + Mat2.identity() * rng.randint(-3, 3))
        else:
            ms = [rand_mat(rng, 4, 3), rand_mat(rng, 4, 3)]
        from polyconvex.core import is_totally_real_matrix
        if not all(is_totally_real_matrix(A) for A in ms):
            continue
        v = decide(WeinstockFamily(ms))
        if v.outcome is Outcome.Convex:
            out.append(v)
    return out


def test_random_convex_certificates_verify():
    for v in _random_convex_verdicts(60, 3):
        res = verify_certificate(v.certificate)
        assert res, res.reasons
        assert reject(v.certificate.to_json()) is False
