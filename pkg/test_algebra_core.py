#!/usr/bin/env python3
"""
Tests for exact scalars, exact matrices, realification and span computations.
"""

from fractions import Fraction

import pytest

from src.algebra_core import (
    I_UNIT,
    ExactMatrix,
    GaussianRational,
    SpanSolver,
    gr_field_ops,
    herm_inner,
    mat_bracket,
    mat_mul,
    parse_scalar,
    format_parts,
    rank_of_family,
    realify,
    simplify,
    solve_in_span,
)
from src.clifford_systems import build_C9_system, build_spin9_system, multiplication_by_i
from src.spin_algebras import build_JC, build_JD


class TestGaussianRational:
    """Field operations on Gaussian rationals."""

    def test_norm_of_one_plus_i(self):
        a = GaussianRational(1, 1)
        b = GaussianRational(1, -1)
        assert gr_field_ops(a, b, "mul") == 2

    def test_half_i_squared(self):
        half_i = GaussianRational(0, Fraction(1, 2))
        assert gr_field_ops(half_i, half_i, "mul") == Fraction(-1, 4)

    def test_conjugate_times_self(self):
        assert gr_field_ops(I_UNIT, None, "conj") * I_UNIT == 1

    def test_add_and_div(self):
        assert gr_field_ops(GaussianRational(1, 2), GaussianRational(3, -1), "add") == GaussianRational(4, 1)
        assert gr_field_ops(GaussianRational(0, 2), GaussianRational(0, 1), "div") == 2

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            gr_field_ops(GaussianRational(1, 1), GaussianRational(0, 0), "div")

    def test_unknown_operation(self):
        with pytest.raises(ValueError):
            gr_field_ops(1, 1, "pow")

    def test_double_conjugate(self):
        x = GaussianRational(Fraction(3, 7), Fraction(-2, 5))
        assert x.conjugate().conjugate() == x
        assert (x * x.conjugate()).im == 0

    def test_simplify_narrows_types(self):
        assert type(simplify(GaussianRational(3, 0))) is int
        assert simplify(GaussianRational(Fraction(1, 2), 0)) == Fraction(1, 2)
        assert isinstance(simplify(GaussianRational(0, 1)), GaussianRational)

    def test_scalar_strings(self):
        assert format_parts(GaussianRational(Fraction(-1, 2), 3)) == ("-1/2", "3")
        assert parse_scalar("-1/2", "3") == GaussianRational(Fraction(-1, 2), 3)
        assert parse_scalar("4") == 4


class TestExactMatrix:
    """Products, brackets, realms and traces."""

    def test_identity_product(self):
        a = ExactMatrix.from_dense([[1, 2], [3, 4]])
        assert mat_mul(ExactMatrix.identity(2), a) == a

    def test_spin9_involution(self):
        i1 = build_spin9_system().member(1)
        assert i1 @ i1 == ExactMatrix.identity(16)

    def test_c9_anticommute(self):
        c9 = build_C9_system()
        p0, p9 = c9.member(0), c9.member(9)
        assert (p0 @ p9 + p9 @ p0).is_zero()

    def test_bracket_with_self(self):
        a = ExactMatrix.from_dense([[1, 2], [3, 4]])
        assert mat_bracket(a, a).is_zero()

    def test_bracket_recovers_j78(self):
        jc = build_JC()
        half = Fraction(1, 2)
        assert mat_bracket(jc.get(8, 9), jc.get(7, 9)).scale(half) == jc.get(7, 8)

    def test_bracket_recovers_j01(self):
        jd = build_JD()
        recovered = mat_bracket(jd.get(1, 9), jd.get(0, 9)).scale(Fraction(1, 2))
        assert recovered == build_spin9_system().member(1).scale(I_UNIT)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            mat_mul(ExactMatrix.identity(2), ExactMatrix.identity(3))

    def test_realm_inference(self):
        assert ExactMatrix.identity(16).realm == "real-16"
        assert ExactMatrix.identity(32).realm == "real-32"
        assert ExactMatrix.identity(16).scale(I_UNIT).realm == "complex-16"
        assert ExactMatrix.identity(8).realm == "other"

    def test_realm_contract(self):
        with pytest.raises(ValueError):
            ExactMatrix.identity(16).scale(I_UNIT).with_realm("real-16")
        with pytest.raises(ValueError):
            ExactMatrix.identity(8, realm="real-16")

    def test_trace_is_cyclic(self):
        jc = build_JC()
        a, b = jc.get(1, 2), jc.get(2, 5) + jc.get(3, 4)
        assert (a @ b).trace() == (b @ a).trace()

    def test_herm_inner(self):
        jc = build_JC()
        assert herm_inner(ExactMatrix.identity(16), ExactMatrix.identity(16)) == 16
        assert herm_inner(jc.get(1, 2), jc.get(1, 3)) == 0
        assert herm_inner(jc.get(1, 2), jc.get(1, 2)) == 16


class TestRealify:
    """Real 32×32 images of complex 16×16 matrices."""

    def test_i_times_identity(self):
        assert realify(ExactMatrix.identity(16).scale(I_UNIT)) == multiplication_by_i(32)

    def test_real_matrix_is_block_diagonal(self):
        j = build_JC().get(1, 2)
        assert realify(j) == ExactMatrix.diag(j, j)
        assert realify(j).realm == "real-32"

    def test_multiplicative(self):
        jd = build_JD()
        a, b = jd.get(0, 3), jd.get(2, 5)
        assert realify(a @ b) == realify(a) @ realify(b)

    def test_rejects_wrong_size(self):
        with pytest.raises(ValueError):
            realify(ExactMatrix.identity(8))


class TestSpan:
    """Ranks and coordinates over the Gaussian rationals."""

    def test_rank_of_empty_family(self):
        assert rank_of_family([]) == 0

    def test_rank_sees_complex_multiples(self):
        ident = ExactMatrix.identity(16)
        assert rank_of_family([ident, ident.scale(2), ident.scale(I_UNIT)]) == 1

    def test_rank_of_spin9_pairs(self):
        assert rank_of_family(build_JC().matrices) == 36

    def test_rank_dimension_mismatch(self):
        with pytest.raises(ValueError):
            rank_of_family([ExactMatrix.identity(2), ExactMatrix.identity(3)])

    def test_solve_in_span(self):
        jc = build_JC()
        basis = [jc.get(1, 2), jc.get(1, 3), jc.get(2, 3)]
        target = basis[0].scale(2) - basis[2].scale(Fraction(3, 4))
        assert solve_in_span(target, basis) == [2, 0, Fraction(-3, 4)]

    def test_solve_outside_span(self):
        jc = build_JC()
        assert solve_in_span(jc.get(4, 5), [jc.get(1, 2), jc.get(1, 3)]) is None

    def test_complex_coordinates(self):
        jd = build_JD()
        target = jd.get(0, 1).scale(GaussianRational(1, 1))
        coeffs = SpanSolver([jd.get(0, 1), jd.get(0, 2)]).solve(target)
        assert coeffs == [GaussianRational(1, 1), 0]

    def test_dependent_basis(self):
        ident = ExactMatrix.identity(4)
        with pytest.raises(ValueError):
            SpanSolver([ident, ident.scale(3)])
