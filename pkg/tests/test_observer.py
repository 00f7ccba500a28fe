import math

import pytest

from mccontrol.observer import (
    DifferentiatorConfig,
    differentiator_deriv,
    differentiator_init,
)
from mccontrol.plant import rk4_step


class TestConfig:
    def test_scaled_gains(self):
        cfg = DifferentiatorConfig((4.0, 4.0), 0.01)
        assert cfg.scaled_gains == (400.0, 40000.0)

    def test_third_order_hurwitz_accepted(self):
        cfg = DifferentiatorConfig((4.0, 6.0, 4.0), 0.01)
        assert cfg.order == 3

    def test_third_order_hurwitz_rejected(self):
        with pytest.raises(ValueError):
            DifferentiatorConfig((1.0, 1.0, 2.0), 0.01)

    def test_positivity_required(self):
        with pytest.raises(ValueError):
            DifferentiatorConfig((4.0, -1.0), 0.01)
        with pytest.raises(ValueError):
            DifferentiatorConfig((4.0, 4.0), 0.0)

    def test_order_limit(self):
        with pytest.raises(ValueError):
            DifferentiatorConfig((1.0, 2.0, 3.0, 4.0), 0.01)


class TestInitAndDeriv:
    def test_init_zero(self):
        cfg = DifferentiatorConfig((4.0, 4.0), 0.01)
        assert differentiator_init(cfg, 0.0) == [0.0, 0.0]

    def test_init_matches_measurement(self):
        cfg = DifferentiatorConfig((4.0, 4.0), 0.01)
        assert differentiator_init(cfg, -1.0) == [-1.0, 0.0]

    def test_equilibrium(self):
        cfg = DifferentiatorConfig((4.0, 4.0), 0.01)
        assert differentiator_deriv(cfg, [0.0, 0.0], 0.0) == [0.0, 0.0]

    def test_innovation_scaling(self):
        cfg = DifferentiatorConfig((4.0, 4.0), 0.01)
        assert differentiator_deriv(cfg, [0.0, 0.0], 1.0) == [400.0, 40000.0]

    def test_third_order_chain(self):
        cfg = DifferentiatorConfig((4.0, 6.0, 4.0), 0.1)
        d = differentiator_deriv(cfg, [0.0, 2.0, 3.0], 1.0)
        assert d[0] == pytest.approx(2.0 + 40.0)
        assert d[1] == pytest.approx(3.0 + 600.0)
        assert d[2] == pytest.approx(4000.0)


def track_sine(mu, dt, horizon, gains=(4.0, 4.0)):
    """Worst derivative-estimate error after the transient dies out."""
    cfg = DifferentiatorConfig(gains, mu)
    est = differentiator_init(cfg, 0.0)
    worst = 0.0
    for k in range(round(horizon / dt)):
        t = k * dt
        est = rk4_step(lambda tt, yy: differentiator_deriv(cfg, yy, math.sin(tt)), est, t, dt)
        if t + dt >= 0.5:
            worst = max(worst, abs(est[1] - math.cos(t + dt)))
    return worst


class TestTracking:
    def test_derivative_estimate_band(self):
        assert track_sine(0.01, 1e-4, 3.0) < 0.02

    def test_smaller_time_scale_reduces_error(self):
        coarse = track_sine(0.01, 2e-4, 2.0)
        fine = track_sine(0.001, 2e-5, 2.0)
        assert fine < coarse
