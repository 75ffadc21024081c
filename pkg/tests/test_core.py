from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import invertible_matrices, matrices
from polyconvex.core import (
    CNum, Mat2, QuadSurd, SpectrumKind, commutator, commutator_det, eigen_spectrum,
    format_scalar, is_totally_real_matrix, pair_obstructed, parse_scalar, real_eigenvalues,
    triple_trace_obstruction,
)
from polyconvex.errors import ValidationError

M = Mat2.of


class TestSpectrum:
    def test_identity(self):
        sp = eigen_spectrum(Mat2.identity())
        assert (sp.trace, sp.det, sp.discriminant, sp.kind) == (2, 1, 0, SpectrumKind.RealRepeated)

    def test_rotation_by_two(self):
        sp = eigen_spectrum(M([[0, -2], [2, 0]]))
        assert (sp.trace, sp.det, sp.discriminant, sp.kind) == (0, 4, -16, SpectrumKind.ComplexConjugate)

    def test_limit_matrix(self):
        sp = eigen_spectrum(M([[0, 1], [-1, 0]]))
        assert (sp.trace, sp.det, sp.discriminant) == (0, 1, -4)
        assert sp.kind is SpectrumKind.ComplexConjugate

    def test_real_eigenvalues_larger_first(self):
        assert real_eigenvalues(M([[1, 0], [0, 2]])) == (2, 1)

    @given(st.lists(st.integers(-10, 10), min_size=4, max_size=4))
    def test_kind_matches_float_eigensolve(self, e):
        A = Mat2(*map(F, e))
        sp = eigen_spectrum(A)
        if abs(float(sp.discriminant)) <= 1e-8:
            return
        ev = np.linalg.eigvals(A.to_numpy())
        float_complex = abs(ev[0].imag) > 1e-12
        assert float_complex == (sp.kind is SpectrumKind.ComplexConjugate)


class TestCommutator:
    def test_power_commutes(self):
        A = M([[1, 2], [3, 4]])
        assert commutator(A, A * A).is_zero()

    def test_examples(self):
        D = M([[1, 0], [0, 2]])
        assert commutator(D, M([[0, 1], [1, 0]])) == M([[0, 1], [-1, 0]]) * -1
        assert commutator(D, M([[0, -1], [1, 0]])) == M([[0, 1], [1, 0]])
        assert commutator_det(D, M([[0, 1], [1, 0]])) == 1
        assert commutator_det(D, M([[0, -1], [1, 0]])) == -1

    def test_rotation_form_identity(self):
        # -t1^2 (s22 - s21)^2 with t1 = 1, s21 = 1, s22 = 2
        assert commutator_det(M([[0, -1], [1, 0]]), M([[1, 0], [0, 2]])) == -1

    @given(matrices(), matrices(), invertible_matrices())
    def test_det_conjugation_invariant(self, A, B, T):
        Ti = T.inv()
        assert commutator_det(A, B) == commutator_det(T * A * Ti, T * B * Ti)


class TestTripleTrace:
    def test_repeated_argument(self):
        A, C = M([[1, 2], [3, 4]]), M([[0, 1], [5, 7]])
        assert triple_trace_obstruction(A, A, C) == 0
        assert triple_trace_obstruction(A, C, C) == 0

    def test_upper_triangular(self):
        mats = [M([[1, 2], [0, 3]]), M([[4, -1], [0, 2]]), M([[0, 5], [0, 1]])]
        assert triple_trace_obstruction(*mats) == 0

    def test_nilpotent_example(self):
        assert triple_trace_obstruction(M([[0, 1], [0, 0]]), M([[0, 0], [1, 0]]), M([[1, 0], [0, 0]])) == 1

    @given(matrices(5, 3), matrices(5, 3), matrices(5, 3), invertible_matrices())
    def test_antisymmetric_and_invariant(self, A, B, C, T):
        t = triple_trace_obstruction(A, B, C)
        assert triple_trace_obstruction(C, B, A) == -t
        Ti = T.inv()
        assert triple_trace_obstruction(T * A * Ti, T * B * Ti, T * C * Ti) == t


class TestTotallyReal:
    def test_examples(self):
        assert is_totally_real_matrix(Mat2.zero())
        assert not is_totally_real_matrix(M([[0, 1], [-1, 0]]))
        assert is_totally_real_matrix(M([[0, -2], [2, 0]]))

    @given(matrices())
    def test_matches_det_a2_plus_i(self, A):
        assert is_totally_real_matrix(A) == ((A * A + Mat2.identity()).det() != 0)

    def test_pair_obstructed(self):
        assert pair_obstructed(M([[0, -2], [2, 0]]))
        assert not pair_obstructed(M([["0", "-1/2"], ["1/2", "0"]]))


class TestScalars:
    @pytest.mark.parametrize("text,value", [
        ("3", F(3)), ("-2/6", F(-1, 3)), ("0.1", F(1, 10)), ("1e-3", F(1, 1000)), ("-1.25", F(-5, 4)),
    ])
    def test_parse_rational(self, text, value):
        assert parse_scalar(text) == value

    def test_decimal_is_exact(self):
        assert parse_scalar("0.1") + parse_scalar("0.2") == parse_scalar("0.3")

    @pytest.mark.parametrize("bad", ["1/0", "abc", "", "1//2", True])
    def test_parse_rejects(self, bad):
        with pytest.raises(ValidationError):
            parse_scalar(bad)

    def test_surd_roundtrip(self):
        x = parse_scalar("1/3-2/9*sqrt(3)")
        assert isinstance(x, QuadSurd)
        assert parse_scalar(format_scalar(x)) == x
        assert format_scalar(F(-1, 3)) == "-1/3"

    def test_surd_arithmetic(self):
        r3 = QuadSurd(0, 1, 3)
        assert r3 * r3 == 3
        assert (1 / r3) * 3 == r3
        assert (r3 + 1) * (r3 - 1) == 2
        assert abs(float(r3) - 3 ** 0.5) < 1e-15

    def test_surd_sign_exact(self):
        x = QuadSurd(F(1732, 1000), -1, 3)  # 1.732 - sqrt 3 < 0
        assert x < 0

    def test_cnum(self):
        i = CNum(0, 1)
        assert i * i == CNum(-1)
        assert (CNum(1, 2) / CNum(1, 2)) == CNum(1)


class TestMat2:
    def test_parse_and_json(self):
        A = Mat2.parse([["1/2", "0"], ["-3", "0.25"]])
        assert A == Mat2(F(1, 2), 0, -3, F(1, 4))
        assert Mat2.parse(A.to_json()) == A

    def test_parse_rejects_shape(self):
        with pytest.raises(ValidationError):
            Mat2.parse([["1", "2", "3"], ["4", "5", "6"]])

    @given(invertible_matrices())
    def test_inverse(self, T):
        assert T * T.inv() == Mat2.identity()

    def test_conj_by(self):
        A, S = M([[1, 2], [3, 4]]), M([[1, 1], [0, 1]])
        assert A.conj_by(S) == S.inv() * A * S
