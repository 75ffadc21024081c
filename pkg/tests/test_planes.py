from fractions import Fraction as F

import pytest
from hypothesis import given

from conftest import invertible_matrices, matrices
from polyconvex.core import CNum, Mat2, is_totally_real_matrix
from polyconvex.errors import (
    EmptyFamily, NotTotallyReal, NotTransverseToBase, SingularT, ValidationError,
)
from polyconvex.planes import (
    GraphPlane, PlaneSpan, WeinstockFamily, apply_real_conjugation, family_from_json,
    graph_to_span, is_totally_real_span, map_span, real_rank, same_real_plane, span_of_matrix,
    to_weinstock_form, transversal,
)
from polyconvex.thomas import THOMAS_CHANGE, thomas_graphs, thomas_matrices

M = Mat2.of
I = CNum(0, 1)
R2 = PlaneSpan.of((1, 0), (0, 1))


class TestSpans:
    def test_real_plane(self):
        assert is_totally_real_span(R2)

    def test_complex_line(self):
        assert not is_totally_real_span(PlaneSpan((CNum(1), CNum(0)), (I, CNum(0))))

    def test_limit_matrix_span(self):
        assert not is_totally_real_span(span_of_matrix(M([[0, 1], [-1, 0]])))

    @given(matrices())
    def test_span_vs_matrix_criterion(self, A):
        assert is_totally_real_span(span_of_matrix(A)) == is_totally_real_matrix(A)


class TestTransversal:
    def test_examples(self):
        assert transversal(M([[1, 0], [0, 2]]), M([[3, 0], [0, 4]]))
        A = M([[1, 2], [3, 4]])
        assert not transversal(A, A)
        # rotation forms (s, t) = (1, 1) and (2, 1): det = (1-2)^2 + 0 = 1
        assert transversal(M([[1, -1], [1, 1]]), M([[2, -1], [1, 2]]))


class TestGraphs:
    def test_conjugate_graph(self):
        s = graph_to_span(GraphPlane(CNum(0), CNum(1)))
        assert s.v1 == (CNum(1), CNum(1)) and s.v2 == (I, -I)

    def test_zero_graph_is_complex_line(self):
        s = graph_to_span(GraphPlane(CNum(0), CNum(0)))
        assert s.v1 == (CNum(1), CNum(0)) and s.v2 == (I, CNum(0))
        assert not is_totally_real_span(s)

    def test_holomorphic_graph_is_complex_line(self):
        s = graph_to_span(GraphPlane(CNum(1), CNum(0)))
        assert s.v1 == (CNum(1), CNum(1)) and s.v2 == (I, I)
        assert not is_totally_real_span(s)


class TestWeinstockForm:
    def test_roundtrip_diag(self):
        f = to_weinstock_form([R2, span_of_matrix(M([[1, 0], [0, 2]]))])
        assert f.matrices == [M([[1, 0], [0, 2]])]

    @pytest.mark.parametrize("eps", ["1/2", "3/10", "1/10"])
    def test_thomas_graphs(self, eps):
        spans = [map_span(THOMAS_CHANGE, graph_to_span(g)) for g in thomas_graphs(eps)]
        f = to_weinstock_form(spans)
        pair = thomas_matrices(eps)
        assert f.matrices == [pair.A1, pair.A2]

    def test_base_not_totally_real(self):
        with pytest.raises(NotTotallyReal):
            to_weinstock_form([PlaneSpan((CNum(1), CNum(0)), (I, CNum(0))), R2])

    def test_not_transverse_to_base(self):
        # shares the real line spanned by (1, 0) with R^2
        p = PlaneSpan((CNum(1), CNum(0)), (CNum(0), CNum(1, 1)))
        with pytest.raises(NotTransverseToBase):
            to_weinstock_form([R2, p])

    @given(matrices(5, 3), matrices(5, 3), invertible_matrices(3, 2), invertible_matrices(3, 2))
    def test_reconstruction_matches_image(self, A, B, S, U):
        # random C-linear image of R^2, M(A), M(B); Weinstock form must reproduce the images
        if not (is_totally_real_matrix(A) and is_totally_real_matrix(B)):
            return
        change = (CNum(S.a11, U.a11), CNum(S.a12, U.a12), CNum(S.a21, U.a21), CNum(S.a22, U.a22))
        det = change[0] * change[3] - change[1] * change[2]
        if det.is_zero():
            return
        spans = [map_span(change, p) for p in (R2, span_of_matrix(A), span_of_matrix(B))]
        try:
            f = to_weinstock_form(spans)
        except NotTransverseToBase:
            return
        for C, p in zip(f.matrices, spans[1:]):
            assert same_real_plane(span_of_matrix(C), map_span(f.provenance, p))


class TestConjugation:
    def test_identity(self):
        f = WeinstockFamily([M([[1, 2], [3, 4]])])
        assert apply_real_conjugation(f, Mat2.identity()).matrices == f.matrices

    def test_flip_rotation(self):
        s, t = F(2), F(3)
        f = WeinstockFamily([Mat2(s, -t, t, s)])
        out = apply_real_conjugation(f, M([[1, 0], [0, -1]]))
        assert out.matrices == [Mat2(s, t, -t, s)]

    def test_singular(self):
        with pytest.raises(SingularT):
            apply_real_conjugation(WeinstockFamily([Mat2.zero()]), M([[1, 2], [2, 4]]))


class TestJson:
    def test_single_matrix(self):
        f = family_from_json({"matrix": [["1", "0"], ["0", "2"]]})
        assert f.matrices == [M([[1, 0], [0, 2]])]

    def test_generated_family_accepts_epsilon(self):
        f = family_from_json(thomas_matrices("3/10").to_json())
        assert f.N == 2

    def test_graph_family(self):
        planes = [{"graph": {"a": ["0", "0"], "b": ["1", "0"]}},
                  {"graph": {"a": ["0", "0"], "b": ["2", "0"]}}]
        f = family_from_json({"planes": planes})
        assert f.N == 1

    @pytest.mark.parametrize("bad", [[], {"planes": []}, {"planes": [{"matrix": 1}]},
                                     {"planes": [], "extra": 1}, {"foo": 1}])
    def test_rejects(self, bad):
        with pytest.raises(ValidationError):
            family_from_json(bad)

    def test_empty_family(self):
        with pytest.raises(EmptyFamily):
            family_from_json([])

    def test_not_totally_real_matrix(self):
        with pytest.raises(NotTotallyReal):
            family_from_json({"matrix": [["0", "1"], ["-1", "0"]]})


def test_real_rank():
    assert real_rank([[1, 0, 0, 0], [2, 0, 0, 0]]) == 1
    assert real_rank([[1, 0, 0, 0], [0, F(1, 3), 0, 0], [1, 1, 0, 0]]) == 2
