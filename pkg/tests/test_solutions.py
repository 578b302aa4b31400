"""Tests for the analytic solutions and their exact verification."""

from fractions import Fraction

import numpy as np
import pytest

from eh_vortices.core.models import CaseTag, CorrectionSource, Coupling, SolutionParams
from eh_vortices.core.poly import IMAG, MPoly, VecPoly, curl, variables
from eh_vortices.exceptions import ConfigError, ParameterError
from eh_vortices.solutions import (
    build_solution,
    classical_ring_locus,
    classical_seed,
    divergence_check,
    maxwell_residual,
    mutate,
    quantum_correction,
    series_correction,
    tabulated_coefficients,
    verify_solution,
)

from .conftest import GOLDEN_DIR


class TestClassicalSeed:
    def test_pair_seed_golden(self, pair_params):
        text = (GOLDEN_DIR / "pair_b_seed.poly").read_text(encoding="utf-8")
        assert classical_seed(pair_params) == VecPoly.from_text(text)

    @pytest.mark.parametrize("case", [CaseTag.RING_A, CaseTag.PAIR_B])
    def test_seed_solves_maxwell(self, case):
        seed = classical_seed(SolutionParams(case=case, a=Fraction(3, 2)))
        assert maxwell_residual(seed)[0].is_zero()

    def test_seed_is_divergence_free(self, ring_params):
        assert divergence_check(classical_seed(ring_params)) == {0: True}

    def test_pair_lines_overlap_at_birth(self, classical_pair):
        # at t = a = 1, F+^2 = (y+1)^2 + x^2 - z^2 + 2i(x - z)
        s = np.linspace(-3.0, 3.0, 61)
        np.testing.assert_allclose(classical_pair.squared(s, -1.0, s, 1.0), 0.0, atol=1e-12)
        for y in (-2.5, -1.5, -0.5, 0.7):
            np.testing.assert_allclose(classical_pair.squared(s, y, s, 1.0), (y + 1.0) ** 2)

    def test_pair_square_at_birth_is_exact(self, pair_params):
        x, _, z, _, _ = variables()
        seed = classical_seed(pair_params)
        square = seed.dot(seed).substitute("t", 1).substitute("y", -1)
        assert square == x**2 - z**2 + (x - z) * 2 * IMAG

    def test_ring_squared_at_t0(self, classical_ring):
        # F+^2 = x^2 + y^2 + (z-1)^2 - 1 + 2i(z-1) for a = 1, t = 0
        value = classical_ring.squared(0.5, 0.5, 1.5, 0.0)
        assert value == pytest.approx((0.25 + 0.25 + 0.25 - 1) + 1j)


class TestCorrections:
    @pytest.mark.parametrize("case", [CaseTag.RING_A, CaseTag.PAIR_B])
    def test_series_vanishes_at_t0(self, case):
        correction = series_correction(SolutionParams(case=case))
        assert not correction.is_zero()
        assert correction.substitute("t", 0).is_zero()

    def test_correction_is_pure_grade_one(self, ring_params):
        assert sorted(quantum_correction(ring_params).coupling_grade()) == [1]

    def test_series_solves_first_order_equation(self, pair_params):
        fplus = classical_seed(pair_params) + series_correction(pair_params)
        assert maxwell_residual(fplus)[1].is_zero()

    def test_tabulated_ring_cubic(self, ring_params):
        cubic, _, _ = tabulated_coefficients(ring_params)
        value = -Fraction(64, 3) * MPoly.constant(IMAG)
        assert cubic == VecPoly(value, value, value)

    def test_tabulated_pair_values(self, pair_params):
        cubic, quadratic, linear = tabulated_coefficients(pair_params)
        assert cubic.evaluate(0.0, 0.0, 0.0, 0.0) == pytest.approx(
            np.array([-24, -68j / 3, -68j / 3])
        )
        # 12(2(z - y + a) + 5ia/3) at x = 1, y = 2, z = 3, a = 1
        assert quadratic.x.evaluate(1.0, 2.0, 3.0, 0.0) == pytest.approx(12 * (4 + 5j / 3))
        assert linear.y.evaluate(2.0, 0.0, 0.0, 0.0) == pytest.approx(-96j)

    def test_tabulated_shape(self, tabulated_ring_params):
        correction = quantum_correction(tabulated_ring_params)
        assert sorted(correction.coupling_grade()) == [1]
        assert correction.substitute("t", 0).is_zero()
        assert all(divergence_check(correction).values())

    def test_source_override(self, ring_params):
        tabulated = quantum_correction(ring_params, CorrectionSource.TABULATED)
        _, _, _, t, lam = variables()
        cubic, quadratic, linear = tabulated_coefficients(ring_params)
        assert tabulated == (cubic * t**3 + quadratic * t**2 + linear * t) * lam


class TestMutation:
    def test_bumps_one_component(self, ring_params):
        seed = classical_seed(ring_params)
        mutated = mutate(seed, "beta.x:1/1000")
        _, _, _, t, lam = variables()
        assert mutated.x - seed.x == lam * t**2 * Fraction(1, 1000)
        assert mutated.y == seed.y

    def test_decimal_value(self, ring_params):
        seed = classical_seed(ring_params)
        assert mutate(seed, "gamma.z:1e-3") == mutate(seed, "gamma.z:1/1000")

    @pytest.mark.parametrize("change", ["beta.w:1", "delta.x:1", "beta.x", "beta.x:abc"])
    def test_invalid_change(self, ring_params, change):
        with pytest.raises(ConfigError, match="invalid mutation"):
            mutate(classical_seed(ring_params), change)


class TestConjugateEquation:
    def test_fminus_equation_holds(self, ring_params):
        """dF-/dt = i curl F- - i lam curl[F+(11 F-^2 - 3 F+^2)] to first order."""
        solution = build_solution(ring_params)
        fplus = solution.fplus
        fminus = fplus.real_field_conjugate()
        _, _, _, _, lam = variables()
        source = (fplus * (11 * fminus.dot(fminus) - 3 * fplus.dot(fplus))).truncate_grade(0)
        residual = (
            fminus.differentiate("t") - curl(fminus) * IMAG + curl(source) * (lam * IMAG)
        ).truncate_grade(1)
        assert residual.is_zero()


class TestVerify:
    @pytest.mark.parametrize("case", [CaseTag.RING_A, CaseTag.PAIR_B])
    def test_series_passes(self, case):
        report = verify_solution(SolutionParams(case=case))
        assert report.passed
        assert report.residual_zero[0]
        assert report.residual_zero[1]
        assert report.initial_condition
        assert ("status", "PASS") in report.to_pairs()

    def test_mutation_fails(self, ring_params):
        report = verify_solution(ring_params, mutation="beta.x:1e-3")
        assert not report.passed
        assert report.residual_zero[0]
        assert not report.residual_zero[1]
        assert report.residual_terms[1] > 0
        assert ("status", "FAIL") in report.to_pairs()

    def test_grade_two_not_asserted(self, ring_params):
        report = verify_solution(ring_params)
        line = dict(report.to_pairs())["residual.grade2"]
        assert "not asserted" in line

    def test_reports_both_sources(self, ring_params):
        report = verify_solution(ring_params)
        assert report.series_passed
        assert not report.tabulated_passed
        assert report.tabulated_residual_terms > 0
        pairs = dict(report.to_pairs())
        assert pairs["series.status"] == "PASS"
        assert pairs["tabulated.status"] == f"FAIL grade1_terms={report.tabulated_residual_terms}"
        assert pairs["status"] == "PASS"

    def test_tabulated_source_fails(self, tabulated_ring_params):
        report = verify_solution(tabulated_ring_params)
        assert not report.passed
        assert not report.residual_zero[1]
        assert report.residual_terms[1] == report.tabulated_residual_terms
        assert dict(report.to_pairs())["series.status"] == "PASS"

    def test_feed_through_scales_as_alpha_to_the_fourth(self, ring_params):
        residual = maxwell_residual(build_solution(ring_params).fplus, max_grade=3)
        assert residual[0].is_zero()
        assert residual[1].is_zero()
        rng = np.random.default_rng(11)
        x, y, z, t = rng.uniform(-1.0, 1.0, size=(4, 20))

        def size(alpha):
            lam = Coupling(alpha=alpha).lam
            total = sum(
                np.broadcast_to(residual[g].evaluate(x, y, z, t, lam), (3, 20)) for g in (2, 3)
            )
            return float(np.max(np.linalg.norm(total, axis=0)))

        ratio = size(0.1) / size(0.05)
        assert 16 * 0.8 <= ratio <= 16 * 1.2

    def test_tabulated_keeps_seed_grade(self, tabulated_ring_params):
        report = verify_solution(tabulated_ring_params)
        assert report.residual_zero[0]
        assert all(report.divergence_zero.values())
        assert report.initial_condition


class TestRingLocus:
    def test_radius(self):
        assert classical_ring_locus(1.0, 0.0).circle_radius == pytest.approx(1.0)
        assert classical_ring_locus(1.0, -1 / 3).circle_radius == pytest.approx(np.sqrt(2 / 3))
        assert classical_ring_locus(2.0, 1.0).circle_radius == pytest.approx(np.sqrt(11.0))

    def test_distance(self):
        locus = classical_ring_locus(1.0, 0.0)
        points = np.array([[1.0, 0.0, 1.0], [0.0, 0.0, 1.0], [0.0, -1.0, 2.0]])
        np.testing.assert_allclose(locus.distance(points), [0.0, 1.0, 1.0], atol=1e-12)

    def test_circle_points_are_zeros(self, classical_ring):
        locus = classical_ring_locus(1.0, 0.5)
        # points on the circle are zeros of F+^2
        centre = np.array(locus.sphere_center)
        normal = np.array(locus.plane_normal) / np.linalg.norm(locus.plane_normal)
        e1 = np.cross(normal, [1.0, 0.0, 0.0])
        e1 /= np.linalg.norm(e1)
        point = centre + locus.circle_radius * e1
        assert abs(classical_ring.squared(*point, 0.5)) < 1e-12

    def test_invalid_scale(self):
        with pytest.raises(ParameterError):
            classical_ring_locus(0.0, 1.0)


class TestAnalyticSolution:
    def test_classical_build(self, ring_params):
        solution = build_solution(ring_params, quantum=False)
        assert solution.lam == 0.0
        assert solution.fplus == classical_seed(ring_params)

    def test_quantum_build(self, ring_params):
        solution = build_solution(ring_params)
        assert solution.lam == pytest.approx(ring_params.lam)
        assert solution.seed == classical_seed(ring_params)
        assert solution.classical().fplus == solution.seed

    def test_zero_coupling_is_the_seed(self, classical_ring):
        solution = build_solution(SolutionParams(alpha=0.0))
        assert solution.lam == 0.0
        rng = np.random.default_rng(3)
        x, y, z, t = rng.uniform(-2.0, 2.0, size=(4, 25))
        np.testing.assert_allclose(
            solution.evaluate(x, y, z, t), classical_ring.evaluate(x, y, z, t), atol=1e-12
        )

    def test_first_order_square_drops_correction_squared(self):
        params = SolutionParams(alpha=0.3)
        full = build_solution(params)
        truncated = build_solution(params, first_order_square=True)
        rng = np.random.default_rng(5)
        x, y, z, t = rng.uniform(-2.0, 2.0, size=(4, 25))
        correction = full.evaluate(x, y, z, t) - full.seed.evaluate(x, y, z, t)
        np.testing.assert_allclose(
            full.squared(x, y, z, t) - truncated.squared(x, y, z, t),
            np.sum(correction * correction, axis=0),
            atol=1e-9,
        )

    def test_first_order_square_of_seed_is_exact(self, classical_ring, ring_params):
        truncated = build_solution(ring_params, quantum=False, first_order_square=True)
        assert truncated.squared(0.5, 0.5, 1.5, 0.3) == classical_ring.squared(0.5, 0.5, 1.5, 0.3)

    def test_fields(self, classical_ring):
        d, b = classical_ring.fields(0.0, 0.0, 0.0, 0.0)
        np.testing.assert_allclose(d, [0.0, -np.sqrt(2.0), 0.0])
        np.testing.assert_allclose(b, [0.0, np.sqrt(2.0), 0.0])

    def test_invalid_params(self):
        with pytest.raises(ParameterError):
            SolutionParams(a=Fraction(0))
        with pytest.raises(ParameterError):
            SolutionParams(m=-1.0)
