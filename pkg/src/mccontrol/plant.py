"""Benchmark plants, the fixed-step integrator, and the closed-loop driver.

Both plants track the reference sin(t).  Their true tracking errors
z_i = d^(i-1)/dt^(i-1) (y - sin t) are available analytically for logging and
validation only; the controller consumes the differentiator estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .constraint import LATERAL, FlexState, make_geometry
from .control import Actuator, Controller, saturate
from .errors import DivergedError
from .manifold import ManifoldChain
from .observer import DifferentiatorConfig, differentiator_init


@dataclass(frozen=True)
class SecondOrderBench:
    """Second-order uncertain plant with van der Pol style damping."""

    order = 2
    initial = (-1.0, 0.5)

    def deriv(self, t: float, x: Sequence[float], u: float) -> tuple[float, float]:
        x1, x2 = x
        g1 = 1.0 + 0.1 * math.cos(x1) + 0.1 * math.sin(t)
        f1 = -x1 + math.sin(t)
        g2 = 2.0 + 0.2 * math.sin(x1 * x2) + 0.1 * math.cos(t)
        f2 = -(x1 * x1 - 1.0) * x2 + math.sin(t) + math.cos(2.0 * t)
        return (g1 * x2 + f1, g2 * u + f2)

    def errors(self, t: float, x: Sequence[float]) -> tuple[float, float]:
        x1, x2 = x
        g1 = 1.0 + 0.1 * math.cos(x1) + 0.1 * math.sin(t)
        dx1 = g1 * x2 - x1 + math.sin(t)
        return (x1 - math.sin(t), dx1 - math.cos(t))

    def gain(self, t: float, x: Sequence[float]) -> float:
        x1, x2 = x
        g1 = 1.0 + 0.1 * math.cos(x1) + 0.1 * math.sin(t)
        g2 = 2.0 + 0.2 * math.sin(x1 * x2) + 0.1 * math.cos(t)
        return g1 * g2


@dataclass(frozen=True)
class ThirdOrderBench:
    """Third-order uncertain plant with a strong oscillatory disturbance."""

    order = 3
    initial = (1.0, -0.2, 0.4)

    def deriv(self, t: float, x: Sequence[float], u: float) -> tuple[float, float, float]:
        x1, x2, x3 = x
        g1 = 1.0 + 0.1 * math.sin(x1) + 0.1 * math.cos(t)
        f1 = -x1 + math.cos(t)
        g2 = 1.0 + 0.1 * math.cos(x1 * x2) + 0.1 * math.sin(t)
        f2 = -(x1 * x1 - 1.0) * x2 + math.sin(t)
        g3 = 2.0 + 0.2 * math.sin(x1 * x2 * x3) + 0.1 * math.cos(t)
        f3 = -(x1 * x1 + x2) * x3 + 10.0 * math.sin(t) + 10.0 * math.cos(2.0 * t)
        return (g1 * x2 + f1, g2 * x3 + f2, g3 * u + f3)

    def errors(self, t: float, x: Sequence[float]) -> tuple[float, float, float]:
        x1, x2, x3 = x
        g1 = 1.0 + 0.1 * math.sin(x1) + 0.1 * math.cos(t)
        dx1 = g1 * x2 - x1 + math.cos(t)
        g2 = 1.0 + 0.1 * math.cos(x1 * x2) + 0.1 * math.sin(t)
        dx2 = g2 * x3 - (x1 * x1 - 1.0) * x2 + math.sin(t)
        dg1 = 0.1 * math.cos(x1) * dx1 - 0.1 * math.sin(t)
        ddx1 = dg1 * x2 + g1 * dx2 - dx1 - math.sin(t)
        return (x1 - math.sin(t), dx1 - math.cos(t), ddx1 + math.sin(t))

    def gain(self, t: float, x: Sequence[float]) -> float:
        x1, x2, x3 = x
        g1 = 1.0 + 0.1 * math.sin(x1) + 0.1 * math.cos(t)
        g2 = 1.0 + 0.1 * math.cos(x1 * x2) + 0.1 * math.sin(t)
        g3 = 2.0 + 0.2 * math.sin(x1 * x2 * x3) + 0.1 * math.cos(t)
        return g1 * g2 * g3


PLANTS = {
    "second_order": SecondOrderBench(),
    "third_order": ThirdOrderBench(),
}


def rk4_step(
    f: Callable[[float, Sequence[float]], Sequence[float]],
    y: Sequence[float],
    t: float,
    dt: float,
) -> list[float]:
    """Classical four-stage Runge-Kutta update."""
    half = 0.5 * dt
    k1 = f(t, y)
    k2 = f(t + half, [yi + half * ki for yi, ki in zip(y, k1)])
    k3 = f(t + half, [yi + half * ki for yi, ki in zip(y, k2)])
    k4 = f(t + dt, [yi + dt * ki for yi, ki in zip(y, k3)])
    sixth = dt / 6.0
    return [
        yi + sixth * (a + 2.0 * (b + c) + d)
        for yi, a, b, c, d in zip(y, k1, k2, k3, k4)
    ]


@dataclass
class SimRecord:
    """One decimated sample of the closed loop."""

    t: float
    z: tuple[float, ...]
    z_hat: tuple[float, ...]
    s: float
    s_fn: float
    bound_lo: float
    bound_hi: float
    xi: float
    v: float
    u: float
    gain: float
    clamped: bool


@dataclass
class SimStats:
    """Whole-run counters (every step, not only decimated samples)."""

    clamp_events: int = 0
    steps: int = 0


def build_scenario(cfg):
    """Assemble the loop components exactly as ``simulate`` does."""
    plant = PLANTS[cfg.plant]
    chain = ManifoldChain(tuple(cfg.laws))
    obs_cfg = DifferentiatorConfig(tuple(cfg.observer_gains), cfg.time_scale)
    z1_0 = plant.errors(0.0, plant.initial)[0]
    z_hat0 = differentiator_init(obs_cfg, z1_0)
    geometry = make_geometry(
        cfg.constraint,
        chain,
        z_hat0,
        margin_gain=cfg.k_0,
        settle=cfg.t_s,
        floor_x=cfg.eps_x,
        floor_y=cfg.eps_y,
    )
    return plant, chain, obs_cfg, geometry


def simulate(
    cfg,
    stats: SimStats | None = None,
    measurement_noise: Callable[[float], float] | None = None,
) -> list[SimRecord]:
    """Run the output-feedback loop with a zero-order hold on the input.

    The controller is evaluated once per step from the current estimate; the
    plant and the differentiator are then advanced jointly by one RK4 step
    with the input held.  ``measurement_noise(t)``, when given, is added to
    the measured output error feeding the differentiator (zero by default).
    A non-finite state aborts with ``DivergedError`` naming the first bad
    quantity and the time.
    """
    plant, chain, obs_cfg, geometry = build_scenario(cfg)
    n = plant.order
    act = Actuator(cfg.u_min, cfg.u_max)
    controller = Controller(cfg.k_u, geometry, FlexState(cfg.rho_e), chain, cfg.barrier_kind)
    last_law = chain.laws[-1]
    lateral = geometry.kind == LATERAL
    noise = measurement_noise if measurement_noise is not None else (lambda t: 0.0)

    x = list(plant.initial)
    z_hat = differentiator_init(obs_cfg, plant.errors(0.0, x)[0] + noise(0.0))
    scaled = obs_cfg.scaled_gains
    dt = cfg.dt
    steps = round(cfg.horizon / dt)
    decim = cfg.decimation
    sin = math.sin
    u_box = [0.0]

    def rhs(t: float, y: Sequence[float]) -> list[float]:
        xs = y[:n]
        zh = y[n:]
        dx = plant.deriv(t, xs, u_box[0])
        err = (xs[0] - sin(t)) + noise(t) - zh[0]
        dz = [zh[i + 1] + scaled[i] * err for i in range(n - 1)]
        dz.append(scaled[n - 1] * err)
        return list(dx) + dz

    records: list[SimRecord] = []
    for k in range(steps + 1):
        t = k * dt
        diag = controller.command(z_hat, t)
        if not math.isfinite(diag.v):
            raise DivergedError("v", t)
        u = saturate(act, diag.v)
        if k % decim == 0:
            z_true = plant.errors(t, x)
            s_vals, sd = chain.evaluate(z_true)
            s_fn = s_vals[-2] - last_law.inverse(sd) if lateral else 0.0
            records.append(
                SimRecord(
                    t=t,
                    z=tuple(z_true),
                    z_hat=tuple(z_hat),
                    s=s_vals[-1],
                    s_fn=s_fn,
                    bound_lo=diag.bound_lower,
                    bound_hi=diag.bound_upper,
                    xi=diag.xi,
                    v=diag.v,
                    u=u,
                    gain=plant.gain(t, x),
                    clamped=diag.clamped,
                )
            )
        if k < steps:
            u_box[0] = u
            y = rk4_step(rhs, x + z_hat, t, dt)
            x = y[:n]
            z_hat = y[n:]
            for i, val in enumerate(x):
                if not math.isfinite(val):
                    raise DivergedError(f"x{i + 1}", t + dt)
            for i, val in enumerate(z_hat):
                if not math.isfinite(val):
                    raise DivergedError(f"zhat{i + 1}", t + dt)
    if stats is not None:
        stats.clamp_events = controller.clamp_events
        stats.steps = steps
    return records
