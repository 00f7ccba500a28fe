import math

import pytest
from hypothesis import given, strategies as st

from mccontrol.transition import (
    Envelope,
    smooth_ramp,
    smooth_ramp_deriv,
    smooth_step,
    smooth_step_deriv,
    smooth_vee,
    smooth_vee_deriv,
)

FD_H = 1e-6


def central_diff(f, z, h=FD_H):
    return (f(z + h) - f(z - h)) / (2.0 * h)


class TestSmoothRamp:
    def test_anchor_values(self):
        assert smooth_ramp(0.0) == 0.0
        assert smooth_ramp(1.0) == 1.0
        assert smooth_ramp(0.5) == pytest.approx(math.exp(-1.0), abs=1e-15)

    def test_flat_outside(self):
        assert smooth_ramp(-3.0) == 0.0
        assert smooth_ramp(2.0) == 1.0

    def test_monotone_on_grid(self):
        zs = [-2.0 + 4.0 * i / 9999 for i in range(10000)]
        vals = [smooth_ramp(z) for z in zs]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_deriv_matches_finite_difference(self):
        for z in [0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99]:
            assert smooth_ramp_deriv(z) == pytest.approx(central_diff(smooth_ramp, z), abs=1e-5)

    def test_deriv_zero_outside_transition(self):
        for z in [-1.0, 0.0, 1.0, 1.5]:
            assert smooth_ramp_deriv(z) == 0.0

    def test_join_continuity_at_zero(self):
        h = FD_H
        left = (smooth_ramp(0.0) - smooth_ramp(-h)) / h
        right = (smooth_ramp(h) - smooth_ramp(0.0)) / h
        assert abs(smooth_ramp(0.0 + h) - smooth_ramp(0.0 - h)) < 1e-6
        assert abs(left - right) < 1e-6


class TestSmoothStep:
    def test_anchor_values(self):
        assert smooth_step(-3.0) == 0.0
        assert smooth_step(0.5) == 0.5
        assert smooth_step(2.0) == 1.0

    def test_monotone_on_grid(self):
        zs = [-2.0 + 4.0 * i / 9999 for i in range(10000)]
        vals = [smooth_step(z) for z in zs]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_deriv_anchor_values(self):
        assert smooth_step_deriv(-1.0) == 0.0
        assert smooth_step_deriv(0.5) == pytest.approx(2.0, abs=1e-12)

    def test_deriv_matches_finite_difference(self):
        for z in [0.05, 0.2, 0.4, 0.5, 0.6, 0.8, 0.95]:
            assert smooth_step_deriv(z) == pytest.approx(central_diff(smooth_step, z), abs=1e-5)

    def test_join_continuity(self):
        h = FD_H
        for z0 in (0.0, 1.0):
            assert abs(smooth_step(z0 + h) - smooth_step(z0 - h)) < 1e-6
            left = (smooth_step(z0) - smooth_step(z0 - h)) / h
            right = (smooth_step(z0 + h) - smooth_step(z0)) / h
            assert abs(left - right) < 1e-6

    def test_deriv_nonnegative(self):
        for i in range(2001):
            z = -1.0 + 2.0 * i / 2000
            assert smooth_step_deriv(z) >= 0.0


class TestSmoothVee:
    def test_anchor_values(self):
        assert smooth_vee(0.0) == 0.0
        assert smooth_vee(-1.5) == 1.0
        assert smooth_vee(0.5) == smooth_step(0.5)

    @given(st.floats(-5.0, 5.0, allow_nan=False))
    def test_even(self, z):
        assert smooth_vee(z) == smooth_vee(-z)

    def test_deriv_zero_at_origin(self):
        assert smooth_vee_deriv(0.0) == 0.0

    def test_deriv_sign_follows_argument(self):
        for z in [0.1, 0.4, 0.9]:
            assert smooth_vee_deriv(z) >= 0.0
            assert smooth_vee_deriv(-z) <= 0.0
            assert smooth_vee_deriv(-z) == -smooth_vee_deriv(z)

    def test_deriv_matches_finite_difference(self):
        for z in [-0.9, -0.5, -0.2, 0.2, 0.5, 0.9]:
            assert smooth_vee_deriv(z) == pytest.approx(central_diff(smooth_vee, z), abs=1e-5)


class TestEnvelope:
    def test_anchor_values(self):
        env = Envelope(2.0, 0.1, 1.0)
        assert env.value(0.0) == pytest.approx(2.0, abs=1e-12)
        assert env.value(1.0) == 0.1
        assert env.value(5.0) == 0.1
        assert env.value(0.5) == pytest.approx(1.9 * math.exp(-1.0) + 0.1, abs=1e-12)

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            Envelope(0.1, 0.1, 1.0)
        with pytest.raises(ValueError):
            Envelope(0.05, 0.1, 1.0)
        with pytest.raises(ValueError):
            Envelope(2.0, 0.1, 0.0)
        with pytest.raises(ValueError):
            Envelope(2.0, -0.1, 1.0)

    def test_non_increasing_and_bounded(self):
        env = Envelope(3.0, 0.2, 2.5)
        ts = [5.0 * i / 4000 for i in range(4001)]
        vals = [env.value(t) for t in ts]
        assert all(b <= a + 1e-15 for a, b in zip(vals, vals[1:]))
        assert all(0.2 <= v <= 3.0 for v in vals)

    def test_slope_nonpositive_and_zero_after_settle(self):
        env = Envelope(2.0, 0.1, 1.0)
        assert env.slope(0.0) == pytest.approx(-1.9, abs=1e-12)
        for t in [0.0, 0.1, 0.5, 0.9]:
            assert env.slope(t) <= 0.0
        assert env.slope(1.0) == 0.0
        assert env.slope(7.0) == 0.0

    def test_slope_matches_finite_difference(self):
        env = Envelope(2.0, 0.1, 1.0)
        for t in [0.1, 0.3, 0.5, 0.7, 0.9]:
            fd = (env.value(t + FD_H) - env.value(t - FD_H)) / (2.0 * FD_H)
            assert env.slope(t) == pytest.approx(fd, abs=1e-5)
