import numpy as np
import pytest
from numpy.testing import assert_allclose

from blstab.interior import (Mollifier, WaveSetup, default_setup,
                             green_function, green_wall_slope,
                             solve_dirac_coefficients,
                             solve_mollified_coefficients, trace_phi,
                             trace_phi_prime, wall_shear)
from blstab.quadrature import gl_adaptive

# amplitudes for alpha = 1, from the closed forms
# a1 = a3 = -1/(sinh(1/2) + sinh(3/2)) and a2 = 1/sinh(1)
A13_ALPHA1 = -0.3773051324175497
A2_ALPHA1 = 0.8509181282393215


class TestGreenFunction:
    def test_symmetry_and_wall_values(self):
        ys = np.array([-0.7, -0.2, 0.1, 0.6])
        for ya in ys:
            for yb in ys:
                assert_allclose(green_function(1.3, ya, yb),
                                green_function(1.3, yb, ya), rtol=1e-13)
        assert_allclose(green_function(1.3, 0.4, -1.0), 0.0, atol=1e-15)
        assert_allclose(green_function(1.3, 0.4, 1.0), 0.0, atol=1e-15)

    def test_solves_helmholtz_away_from_source(self):
        alpha, b = 0.8, 0.25
        e = 1e-4
        for y in (-0.6, 0.7):
            gpp = (green_function(alpha, b, y + e) - 2.0 * green_function(alpha, b, y)
                   + green_function(alpha, b, y - e)) / e**2
            assert_allclose(gpp, alpha**2 * green_function(alpha, b, y),
                            rtol=1e-6, atol=1e-10)

    def test_unit_jump_in_slope_at_source(self):
        alpha, b = 1.1, -0.3
        e = 1e-7
        right = (green_function(alpha, b, b + e) - green_function(alpha, b, b)) / e
        left = (green_function(alpha, b, b) - green_function(alpha, b, b - e)) / e
        assert_allclose(right - left, 1.0, rtol=1e-6)

    def test_wall_slope_matches_finite_difference(self):
        alpha, b = 0.9, 0.35
        e = 1e-7
        fd = (green_function(alpha, b, -1.0 + e) - 0.0) / e
        assert_allclose(green_wall_slope(alpha, b, -1), fd, rtol=1e-6)


class TestCoefficients:
    def test_dirac_closed_form(self):
        a1, a2, a3 = solve_dirac_coefficients(1.0)
        assert_allclose(a1, A13_ALPHA1, rtol=1e-14)
        assert_allclose(a3, A13_ALPHA1, rtol=1e-14)
        assert_allclose(a2, A2_ALPHA1, rtol=1e-14)

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
    def test_dirac_coefficients_cancel_wall_shear(self, alpha):
        setup = default_setup(alpha=alpha)
        for side in (-1, 1):
            assert abs(wall_shear(0.0, setup, side)) <= 1e-12

    def test_mollified_amplitudes_match_dirac(self):
        # the even bump moment against the exponential wall slope scales
        # both sides of the 2x2 system by one factor, so the mollified
        # amplitudes agree with the Dirac ones to quadrature precision at
        # every width, not merely in the mu -> 0 limit
        chi = Mollifier()
        target = solve_dirac_coefficients(1.0)[0]
        for mu in (0.2, 0.1, 0.05):
            setup = WaveSetup(alpha=1.0, a=(0.0, A2_ALPHA1, 0.0), mu=mu)
            a1, a3 = solve_mollified_coefficients(setup, chi)
            assert_allclose(a1, a3, rtol=1e-10)
            assert abs(a1 - target) <= 1e-12

    def test_mollified_setup_cancels_wall_shear(self):
        chi = Mollifier()
        base = WaveSetup(alpha=1.0, a=(0.0, A2_ALPHA1, 0.0), mu=0.1)
        a1, a3 = solve_mollified_coefficients(base, chi)
        setup = WaveSetup(alpha=1.0, a=(a1, A2_ALPHA1, a3), mu=0.1)
        for side in (-1, 1):
            assert abs(wall_shear(0.0, setup, side)) <= 1e-10

    def test_mollified_requires_positive_width(self):
        setup = default_setup(alpha=1.0)
        with pytest.raises(ValueError):
            solve_mollified_coefficients(setup, Mollifier())


class TestWaveSetupValidation:
    def test_rejects_nonpositive_alpha(self):
        with pytest.raises(ValueError):
            WaveSetup(alpha=0.0, a=(1.0, 1.0, 1.0))

    def test_rejects_unordered_positions(self):
        with pytest.raises(ValueError):
            WaveSetup(alpha=1.0, a=(1.0, 1.0, 1.0), b=(0.5, 0.0, -0.5))

    def test_rejects_mollifier_leaving_channel(self):
        with pytest.raises(ValueError):
            WaveSetup(alpha=1.0, a=(1.0, 1.0, 1.0), b=(-0.9, 0.0, 0.5), mu=0.2)


class TestMollifier:
    def test_unit_mass(self):
        chi = Mollifier()
        assert_allclose(gl_adaptive(chi, -1.0, 1.0).real, 1.0, rtol=1e-10)
        assert_allclose(gl_adaptive(lambda y: chi.scaled(y, 0.3, 0.05),
                                    0.25, 0.35).real, 1.0, rtol=1e-9)

    def test_compact_support(self):
        chi = Mollifier()
        assert chi(np.array([-1.0, 1.0, 2.0])).max() == 0.0


class TestWallTrace:
    def test_phi_vanishes_initially(self):
        assert_allclose(trace_phi(0.0), 0.0, atol=1e-15)
        assert_allclose(trace_phi(0.0, alpha=0.7), 0.0, atol=1e-15)

    def test_reference_values(self):
        # anchors for the t = 7.65 configuration used across the suite
        assert_allclose(trace_phi(7.65), -0.7348466315555124, rtol=1e-14)
        assert_allclose(trace_phi_prime(7.65), 1.4945818396245193, rtol=1e-14)

    def test_prime_matches_finite_difference(self):
        e = 1e-6
        for t in (0.3, 2.0, 7.65):
            fd = (trace_phi(t + e) - trace_phi(t - e)) / (2.0 * e)
            assert_allclose(trace_phi_prime(t), fd, rtol=1e-8)

    def test_accepts_arrays(self):
        t = np.linspace(0.0, 10.0, 11)
        assert trace_phi(t).shape == t.shape

    def test_wall_shear_periodicity(self):
        # half-integer vortex positions give period 4*pi/alpha
        setup = default_setup(alpha=1.0)
        period = 4.0 * np.pi
        for t in (0.7, 2.9):
            assert_allclose(wall_shear(t + period, setup, -1),
                            wall_shear(t, setup, -1), rtol=1e-10, atol=1e-12)
