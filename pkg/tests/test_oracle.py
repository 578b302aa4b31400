"""Tests for the finite-difference oracle."""

import numpy as np
import pytest

from eh_vortices.core.models import Coupling, GridSpec, SolutionParams
from eh_vortices.exceptions import IntegrationError, ParameterError
from eh_vortices.oracle import (
    ConvergenceRow,
    GridField,
    canonical_rates,
    convergence_study,
    convergence_table,
    discrete_divergence,
    integrate,
    lattice_curl,
    max_divergence,
    max_interior_error,
    refinement_ladder,
    rhs,
    sample_grid_field,
)
from eh_vortices.solutions import build_solution, classical_seed

ORACLE_GRID = GridSpec.cube(2.0, 10)


class TestStencils:
    def test_curl_of_quadratic_field_is_exact(self):
        grid = GridSpec.cube(1.0, 8)
        x, y, z = grid.mesh()
        # curl(y z^2, x^2, x y) = (x, 2yz - y, 2x - z^2)
        v = np.stack([y * z**2, x**2, x * y])
        expected = np.stack([x, 2 * y * z - y, 2 * x - z**2])
        inner = (slice(None), slice(2, -2), slice(2, -2), slice(2, -2))
        np.testing.assert_allclose(
            lattice_curl(v, grid.spacing)[inner], expected[inner], atol=1e-12
        )

    def test_seed_is_divergence_free(self, classical_ring):
        state = sample_grid_field(classical_ring, ORACLE_GRID, 0.3)
        div_d, div_b = discrete_divergence(state)
        assert np.max(np.abs(div_d)) < 1e-12
        assert np.max(np.abs(div_b)) < 1e-12
        assert max_divergence(state, margin=2) < 1e-12

    def test_grid_field_shape_checked(self):
        with pytest.raises(ParameterError, match="shape"):
            zeros = np.zeros((3, 4, 4, 4))
            GridField(D=zeros, B=zeros, grid=ORACLE_GRID, time=0.0)

    def test_boundary_mask(self, classical_ring):
        state = sample_grid_field(classical_ring, ORACLE_GRID, 0.0)
        mask = state.boundary_mask()
        assert mask.shape == (11, 11, 11)
        assert mask[0, 5, 5]
        assert mask[5, 5, 8]
        assert not mask[5, 5, 5]


class TestCanonicalRates:
    def test_classical_rates_are_time_derivatives(self, ring_params):
        seed = classical_seed(ring_params)
        d_rate, b_rate = canonical_rates(seed)
        fminus = seed.real_field_conjugate()
        d = seed + fminus
        b = (seed - fminus) * -1j
        assert d_rate.coupling_grade()[0] == d.differentiate("t")
        assert b_rate.coupling_grade()[0] == b.differentiate("t")

    def test_numeric_rhs_matches_polynomial_rates(self, ring_params):
        c = Coupling(alpha=0.1)
        params = SolutionParams(case=ring_params.case, a=ring_params.a, alpha=0.1)
        seed_only = build_solution(params, quantum=False)
        grid = GridSpec.cube(1.0, 8)
        state = sample_grid_field(seed_only, grid, 0.2)
        numeric = rhs(state, c)
        d_rate, b_rate = canonical_rates(seed_only.fplus)
        x, y, z = grid.mesh()
        exact_d = d_rate.evaluate(x, y, z, 0.2, c.lam) / np.sqrt(2.0)
        exact_b = b_rate.evaluate(x, y, z, 0.2, c.lam) / np.sqrt(2.0)
        inner = (slice(None), slice(2, -2), slice(2, -2), slice(2, -2))
        assert np.max(np.abs(exact_d.imag)) < 1e-12
        np.testing.assert_allclose(numeric.D[inner], exact_d.real[inner], atol=1e-9)
        np.testing.assert_allclose(numeric.B[inner], exact_b.real[inner], atol=1e-9)


class TestIntegrate:
    def test_maxwell_seed_is_reproduced(self, classical_ring):
        state = sample_grid_field(classical_ring, ORACLE_GRID, 0.0)
        final = integrate(state, Coupling.classical(), 0.0, 0.2, 0.05, boundary=classical_ring)
        assert final.time == pytest.approx(0.2)
        assert max_interior_error(final, classical_ring, margin=3) < 1e-10

    def test_step_must_be_positive(self, classical_ring):
        state = sample_grid_field(classical_ring, ORACLE_GRID, 0.0)
        with pytest.raises(ParameterError, match="positive"):
            integrate(state, Coupling.classical(), 0.0, 0.1, 0.0)

    def test_cfl_bound(self, classical_ring):
        state = sample_grid_field(classical_ring, ORACLE_GRID, 0.0)
        with pytest.raises(ParameterError, match="stability"):
            integrate(state, Coupling.classical(), 0.0, 1.0, 0.3)

    def test_non_finite_state_aborts(self, classical_ring):
        state = sample_grid_field(classical_ring, ORACLE_GRID, 0.0)
        d = state.D.copy()
        d[0, 5, 5, 5] = np.nan
        bad = GridField(D=d, B=state.B, grid=ORACLE_GRID, time=0.0)
        with pytest.raises(IntegrationError) as info:
            integrate(bad, Coupling.classical(), 0.0, 0.1, 0.05)
        assert info.value.time > 0.0


class TestConvergence:
    def test_ladder(self):
        assert refinement_ladder(16, 0.1, 3) == [(16, 0.1), (32, 0.05), (64, 0.025)]

    def test_table_orders(self):
        rows = [ConvergenceRow(16, 0.1, 1e-2), ConvergenceRow(32, 0.05, 1e-3)]
        table = convergence_table(rows)
        assert list(table.columns) == ["resolution", "dt", "max_interior_error", "observed_order"]
        assert np.isnan(table["observed_order"].iloc[0])
        assert table["observed_order"].iloc[1] == pytest.approx(np.log2(10.0))

    def test_study_rows(self, classical_ring):
        rows = convergence_study(classical_ring, 2.0, [(10, 0.05), (12, 0.05)], 0.0, 0.1)
        assert [r.resolution for r in rows] == [10, 12]
        assert all(r.max_interior_error < 1e-10 for r in rows)


class TestTimeOrder:
    def test_error_falls_sixteenfold_when_dt_halves(self):
        # RK4 is exact in time on the polynomial solutions
        grid = GridSpec.cube(2.0, 16)
        x, y, z = grid.mesh()
        pulse = np.exp(-(x**2 + y**2 + z**2) / (2 * 0.35**2))
        zero = np.zeros_like(pulse)
        state = GridField(
            D=np.stack([zero, zero, pulse]), B=np.stack([zero, pulse, zero]), grid=grid, time=0.0
        )
        c = Coupling(alpha=0.3)
        reference = integrate(state, c, 0.0, 0.4, 0.1 / 16)

        def error(dt):
            final = integrate(state, c, 0.0, 0.4, dt)
            return max(
                np.max(np.abs(final.D - reference.D)), np.max(np.abs(final.B - reference.B))
            )

        ratio = error(0.1) / error(0.05)
        assert 8.0 <= ratio <= 32.0


@pytest.mark.slow
class TestQuantumAgreement:
    def test_ring_matches_analytic_solution(self, ring_params):
        solution = build_solution(ring_params)
        grid = GridSpec.cube(2.0, 64)
        state = sample_grid_field(solution, grid, 0.0)
        final = integrate(state, ring_params.coupling, 0.0, 0.1, 0.01, boundary=solution)
        assert final.time == pytest.approx(0.1)
        assert max_interior_error(final, solution) <= 1e-4
        assert max_divergence(final) < 1e-6
