import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.special import erfc

from blstab.heat import (CLAIM_LITERAL, HalfLineGrid, build_profile,
                         eval_duhamel, solve_heat_cn, write_profile_csv)
from blstab.interior import trace_phi, trace_phi_prime

ONES = lambda s: np.ones_like(np.asarray(s, dtype=float))


class TestGridValidation:
    def test_rejects_nonpositive_h(self):
        with pytest.raises(ValueError):
            HalfLineGrid(Y0=30.0, h=0.0)

    def test_rejects_incommensurate_spacing(self):
        with pytest.raises(ValueError):
            HalfLineGrid(Y0=30.0, h=0.07)

    def test_rejects_short_domain(self):
        with pytest.raises(ValueError):
            HalfLineGrid(Y0=10.0, h=0.01)

    def test_nodes(self):
        g = HalfLineGrid(Y0=30.0, h=0.02)
        assert g.N == 1500
        assert_allclose(g.Y[[0, -1]], [0.0, 30.0], rtol=0, atol=0)


class TestCrankNicolson:
    def test_constant_data_matches_erfc(self):
        grid = HalfLineGrid(Y0=30.0, h=0.02)
        sol = solve_heat_cn(ONES, grid, t=2.0, dt=1e-3)
        exact = erfc(grid.Y / (2.0 * np.sqrt(2.0)))
        assert np.max(np.abs(sol.w - exact)) <= 1e-4

    def test_rejects_incommensurate_time(self):
        grid = HalfLineGrid(Y0=30.0, h=0.02)
        with pytest.raises(ValueError):
            solve_heat_cn(ONES, grid, t=0.00015, dt=1e-4)

    def test_rejects_nonpositive_time(self):
        grid = HalfLineGrid(Y0=30.0, h=0.02)
        with pytest.raises(ValueError):
            solve_heat_cn(ONES, grid, t=-1.0)

    def test_second_order_in_dt(self):
        # compare against a fine-dt run on the same grid so the shared
        # spatial error cancels and the dt^2 order is visible
        grid = HalfLineGrid(Y0=30.0, h=0.02)
        ref = solve_heat_cn(trace_phi, grid, 1.0, dt=5e-4).w
        errs = [np.max(np.abs(solve_heat_cn(trace_phi, grid, 1.0, dt).w - ref))
                for dt in (4e-3, 2e-3)]
        assert errs[1] <= errs[0] / 3.0


class TestDuhamel:
    def test_constant_data_matches_erfc(self):
        Y = np.array([0.0, 0.5, 1.0, 2.0, 5.0])
        for t in (0.5, 2.0):
            vals = np.array([eval_duhamel(ONES, y, t) for y in Y])
            assert_allclose(vals, erfc(Y / (2.0 * np.sqrt(t))), atol=1e-10)

    def test_reference_value(self):
        # anchor for the t = 7.65 trace-driven layer at Y = 1
        assert_allclose(eval_duhamel(trace_phi, 1.0, 7.65),
                        -0.9036406087752634, rtol=1e-12)

    def test_wall_value_is_trace(self):
        for t in (0.5, 7.65):
            assert_allclose(eval_duhamel(trace_phi, 0.0, t), trace_phi(t),
                            rtol=1e-12)


class TestProfile:
    def test_wall_anchoring_and_far_field(self, profile_ref):
        assert profile_ref.V[0] == 0.0
        assert_allclose(profile_ref.far_field, -trace_phi(7.65), rtol=1e-12)
        assert_allclose(profile_ref.V[-1], profile_ref.far_field, atol=1e-10)

    def test_conventions_differ_by_constant(self, grid_ref, profile_ref):
        lit = build_profile(7.65, grid_ref, convention=CLAIM_LITERAL)
        shift = lit.V - profile_ref.V
        assert_allclose(shift, 2.0 * trace_phi(7.65) * np.ones_like(shift),
                        atol=1e-10)
        assert_allclose(lit.Vpp, profile_ref.Vpp, atol=1e-12)

    def test_wall_curvature_is_trace_derivative(self, profile_ref):
        # w_t = w_YY at the wall turns the Dirichlet data into curvature
        assert_allclose(profile_ref.Vpp[0], trace_phi_prime(7.65), rtol=1e-9)

    def test_inflection_point_appears_with_instability(self, grid_ref, profile_ref):
        assert np.min(profile_ref.Vpp) < 0.0 < np.max(profile_ref.Vpp)
        early = build_profile(0.1, grid_ref)
        assert not (np.min(early.Vpp) < 0.0 < np.max(early.Vpp))

    def test_rejects_unknown_convention(self, grid_ref):
        with pytest.raises(ValueError):
            build_profile(7.65, grid_ref, convention="centered")

    def test_csv_round_trip(self, profile_ref, tmp_path):
        path = tmp_path / "profile.csv"
        write_profile_csv(profile_ref, path)
        header = path.read_text().splitlines()[0]
        for key in ("t=", "h=", "Y0=", "alpha=", "convention="):
            assert key in header
        data = np.loadtxt(path, delimiter=",", skiprows=2)
        assert_allclose(data[:, 0], profile_ref.grid.Y, rtol=1e-15)
        assert_allclose(data[:, 1], profile_ref.V, rtol=1e-15)
        assert_allclose(data[:, 2], profile_ref.Vpp, rtol=1e-15)
