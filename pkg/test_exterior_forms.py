#!/usr/bin/env python3
"""
Tests for the sparse exterior algebra, the complex view, τ2/τ4 and the
Kähler-form matrices ψ^C and ψ^D.
"""

import json
import random
from fractions import Fraction

import pytest

from src.algebra_core import I_UNIT, ExactMatrix, mat_bracket, realify
from src.clifford_systems import multiplication_by_i
from src.exterior_forms import (
    PRIMED,
    UNPRIMED,
    ComplexBladeView,
    FormMatrix,
    SparseForm,
    build_psi_C,
    build_psi_D,
    dz,
    dzbar,
    form_digest,
    form_lines,
    kahler_form_of,
    lie_derivation,
    omega,
    parse_form_records,
    pfaffian,
    restrict,
    tau,
    tau2,
    tau2_decomposition,
    tau4,
    tau4_minor_oracle,
    tau4_with_stats,
    to_complex_view,
    wedge,
    wedge_power,
)
from src.spin_algebras import build_JC, build_JD


def random_form_matrix(n: int, seed: int, covectors: int = 8) -> FormMatrix:
    """Skew n×n matrix of random integer 2-forms on the first few covectors."""
    rng = random.Random(seed)
    upper = {}
    for a in range(n):
        for b in range(a + 1, n):
            form = SparseForm.zero(2)
            for _ in range(3):
                p, q = rng.sample(range(covectors), 2)
                form = form + SparseForm.blade(p, q, coeff=rng.randint(-3, 3))
            upper[(a, b)] = form
    return FormMatrix(n, upper)


@pytest.fixture(scope="module")
def psi_c():
    return build_psi_C()


@pytest.fixture(scope="module")
def psi_d():
    return build_psi_D()


class TestSparseForm:
    """Blades, signs and the wedge product."""

    def test_blade_order_sign(self):
        assert SparseForm.blade(1, 0) == -SparseForm.blade(0, 1)
        assert SparseForm.blade(2, 0, 1) == SparseForm.blade(0, 1, 2)
        assert SparseForm.blade(3, 3).is_zero()

    def test_covectors_anticommute(self):
        a, b = SparseForm.covector(0), SparseForm.covector(5)
        assert a ^ b == SparseForm.blade(0, 5)
        assert b ^ a == -(a ^ b)
        assert (a ^ a).is_zero()

    def test_two_forms_commute(self):
        f = SparseForm.blade(0, 1) + SparseForm.blade(2, 3, coeff=2)
        g = SparseForm.blade(4, 5) - SparseForm.blade(0, 6)
        assert f ^ g == g ^ f

    def test_wedge_power(self):
        f = SparseForm.blade(0, 1) + SparseForm.blade(2, 3)
        assert wedge_power(f, 2) == SparseForm.blade(0, 1, 2, 3, coeff=2)
        assert wedge_power(f, 3).is_zero()

    def test_degree_overflow(self):
        with pytest.raises(ValueError):
            wedge(SparseForm.blade(*range(17)), SparseForm.blade(*range(16)))

    def test_degree_mismatch(self):
        with pytest.raises(ValueError):
            SparseForm.blade(0, 1) + SparseForm.covector(2)

    def test_coefficient_in_given_order(self):
        f = SparseForm.blade(0, 1, 2, coeff=5)
        assert f.coefficient(1, 0, 2) == -5
        assert f.coefficient(0, 1, 3) == 0

    def test_restrict(self):
        f = SparseForm.blade(0, 1) + SparseForm.blade(2, 3)
        assert restrict(f, [1]) == SparseForm.blade(2, 3)

    def test_content_and_division(self):
        f = SparseForm.blade(0, 1, coeff=6) + SparseForm.blade(2, 3, coeff=4)
        assert f.content() == 2
        assert f.divide_exact(2) == SparseForm.blade(0, 1, coeff=3) + SparseForm.blade(2, 3, coeff=2)
        with pytest.raises(ValueError):
            f.divide_exact(4)

    def test_records(self):
        f = SparseForm.blade(0, 1, coeff=Fraction(-1, 2))
        line = next(form_lines(f, "x"))
        assert line == '{"form": "x", "blade": [0, 1], "re": "-1/2", "im": "0"}'
        assert parse_form_records([json.loads(line)]) == f


class TestKahlerForms:
    """Kähler forms of complex structures and their complex view."""

    def test_omega(self):
        w = omega()
        assert len(w) == 16
        assert w.coefficient(0, 16) == -1
        assert kahler_form_of(multiplication_by_i(32)) == w

    def test_omega_complex_view(self):
        expected = ComplexBladeView.from_words(2, [(I_UNIT * Fraction(1, 2), [dz(a), dzbar(a)]) for a in range(16)])
        view = to_complex_view(omega())
        assert view == expected
        assert view.is_pure(1, 1)
        assert view.to_real() == omega()

    def test_omega_squared_coefficient(self):
        view = to_complex_view(wedge(omega(), omega()))
        assert view.coefficient_of([dz(0), dzbar(0), dz(1), dzbar(1)]) == Fraction(-1, 2)

    def test_psi09_complex_view(self, psi_d):
        half_i = I_UNIT * Fraction(1, 2)
        expected = ComplexBladeView.from_words(
            2, [(half_i if a < 8 else -half_i, [dz(a), dzbar(a)]) for a in range(16)])
        assert to_complex_view(psi_d.labelled(0, 9)) == expected

    def test_kahler_rejects_bad_input(self):
        with pytest.raises(ValueError):
            kahler_form_of(ExactMatrix.identity(16))
        with pytest.raises(ValueError):
            kahler_form_of(ExactMatrix.identity(8))
        with pytest.raises(ValueError):
            kahler_form_of(build_JD().get(0, 1))

    def test_psi_entries_have_eight_terms(self, psi_c):
        assert all(len(f) == 8 for _, f in psi_c.upper_items())
        assert psi_c.labelled(1, 2) == psi_c.entry(0, 1)
        assert psi_c.entry(1, 0) == -psi_c.entry(0, 1)


class TestLieDerivation:
    """The degree-preserving derivation induced by a matrix."""

    def test_diagonal_on_blade(self):
        a = ExactMatrix.from_dense([[1, 0], [0, 0]])
        assert lie_derivation(a, SparseForm.blade(0, 1)) == -SparseForm.blade(0, 1)

    def test_leibniz(self):
        a = ExactMatrix.from_dense([[0, 1, 2, 0], [-1, 0, 0, 3], [1, 0, 2, 0], [0, -2, 1, 1]])
        f = SparseForm.covector(0) + SparseForm.covector(2).scale(3)
        g = SparseForm.covector(1) - SparseForm.covector(3)
        lhs = lie_derivation(a, wedge(f, g))
        rhs = wedge(lie_derivation(a, f), g) + wedge(f, lie_derivation(a, g))
        assert lhs == rhs

    def test_kahler_form_of_bracket(self):
        jc = build_JC()
        a, j = jc.get(1, 3), jc.get(1, 2)
        assert lie_derivation(a, kahler_form_of(j)) == kahler_form_of(mat_bracket(a, j))

    def test_omega_invariant_under_complex_linear(self):
        assert lie_derivation(realify(build_JD().get(0, 3)), omega()).is_zero()

    def test_dimension_too_small(self):
        with pytest.raises(ValueError):
            lie_derivation(ExactMatrix.identity(2), SparseForm.blade(0, 5))


class TestTau:
    """τ2, τ4, Pfaffians and the minor oracle."""

    def test_tau2_of_psi_c_vanishes(self, psi_c):
        assert tau2(psi_c).is_zero()

    def test_tau2_of_psi_d(self, psi_d):
        w = omega()
        assert tau2(psi_d) == wedge(w, w).scale(-3)

    def test_tau2_is_tau_1(self):
        m = random_form_matrix(5, seed=7)
        assert tau2(m) == tau(m, 1)

    def test_tau4_of_small_matrix(self):
        m = random_form_matrix(3, seed=1)
        assert tau4(m).is_zero()
        assert tau4(m).degree == 8

    def test_tau4_matches_oracle(self):
        m = random_form_matrix(5, seed=11)
        assert tau4(m) == tau4_minor_oracle(m)
        assert tau4(m) == tau(m, 2)

    def test_tau4_worker_count_independent(self):
        m = random_form_matrix(6, seed=3)
        assert tau4(m, workers=2) == tau4(m, workers=1)

    def test_tau4_stats(self):
        m = random_form_matrix(6, seed=5)
        form, stats = tau4_with_stats(m)
        assert stats["quadruples"] == 15
        assert stats["terms"] == len(form)

    def test_tau4_psi_c(self, psi_c):
        result = tau4(psi_c)
        assert not result.is_zero()
        assert result == tau4_minor_oracle(psi_c)
        assert result == tau(psi_c, 2)

    def test_conjugation_invariance(self):
        m = random_form_matrix(5, seed=13)
        c = m.conjugate([2, 0, 4, 1, 3], [1, -1, 1, 1, -1])
        assert tau2(c) == tau2(m)
        assert tau4(c) == tau4(m)

    def test_bad_conjugation(self):
        with pytest.raises(ValueError):
            random_form_matrix(3, seed=2).conjugate([0, 0, 1], [1, 1, 1])

    def test_pfaffian(self):
        m = random_form_matrix(4, seed=17)
        assert pfaffian(m.submatrix([0, 1])) == m.entry(0, 1)
        expected = (wedge(m.entry(0, 1), m.entry(2, 3)) - wedge(m.entry(0, 2), m.entry(1, 3))
                    + wedge(m.entry(0, 3), m.entry(1, 2)))
        assert pfaffian(m) == expected
        with pytest.raises(ValueError):
            pfaffian(m.submatrix([0, 1, 2]))

    def test_tau_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            tau(random_form_matrix(3, seed=1), 0)

    def test_tau2_of_psi_d_under_signed_permutations(self, psi_d):
        rng = random.Random(2024)
        expected = tau2(psi_d)
        for _ in range(5):
            perm = rng.sample(range(10), 10)
            signs = [rng.choice((1, -1)) for _ in range(10)]
            assert tau2(psi_d.conjugate(perm, signs)) == expected

    def test_tau2_of_psi_d_is_invariant(self, psi_d):
        t2 = tau2(psi_d)
        mats = [realify(m) for m in build_JD().matrices] + [multiplication_by_i(32)]
        assert len(mats) == 46
        for m in mats:
            assert lie_derivation(m, t2).is_zero()

    @pytest.mark.slow
    def test_tau4_of_psi_d_under_signed_permutation(self, psi_d):
        rng = random.Random(7)
        perm = rng.sample(range(10), 10)
        signs = [rng.choice((1, -1)) for _ in range(10)]
        assert tau4(psi_d.conjugate(perm, signs), workers=2) == tau4(psi_d, workers=2)

    @pytest.mark.slow
    def test_tau4_of_psi_d_is_invariant(self, psi_d):
        t4 = tau4(psi_d, workers=2)
        jd = build_JD()
        for m in (multiplication_by_i(32), realify(jd.get(0, 1)), realify(jd.get(1, 2)), realify(jd.get(8, 9))):
            assert lie_derivation(m, t4).is_zero()

    @pytest.mark.slow
    def test_tau4_psi_d_matches_oracle(self, psi_d):
        assert tau4(psi_d, workers=2) == tau4_minor_oracle(psi_d, workers=2)

    @pytest.mark.slow
    def test_tau4_psi_d_digest_independent_of_workers(self, psi_d):
        digests = {form_digest(tau4(psi_d, workers=w), "phi10") for w in (1, 2, 8)}
        assert len(digests) == 1


class TestTau2Decomposition:
    """Step-by-step reduction of τ2(ψ^D) to −3ω²."""

    def test_report_passes(self, psi_d):
        report = tau2_decomposition(psi_d).report()
        assert report.passed, report.failures()
        assert report.name == "tau2-decomposition"

    def test_parts_sum(self, psi_d):
        parts = tau2_decomposition(psi_d).parts
        assert parts["rho2"] + parts["mu2"] + parts["nu2"] == tau2(psi_d)

    def test_nu2_restrictions_without_psi09(self, psi_d):
        decomposition = tau2_decomposition(psi_d)
        nu2, psi09_sq = decomposition.parts["nu2"], decomposition.parts["psi09^2"]
        for killed in (PRIMED, UNPRIMED):
            assert not restrict(nu2, killed).is_zero()
            assert restrict(nu2 - psi09_sq, killed).is_zero()
        by_name = {c.name: c.passed for c in decomposition.checks}
        assert by_name["(nu2 - psi09^2)|V = 0"]
        assert by_name["(nu2 - psi09^2)|V' = 0"]

    def test_rejects_psi_c(self, psi_c):
        with pytest.raises(ValueError):
            tau2_decomposition(psi_c)
