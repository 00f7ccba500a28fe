"""Smooth transition functions and the shrinking performance envelope.

All three transitions are built from exponentials that are flat to every
order at their joins, so piecewise definitions glue together with continuous
derivatives of any order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# exp() saturates to 0/1 within machine precision beyond this argument size
_EXP_CLAMP = 700.0


def smooth_ramp(z: float) -> float:
    """One-sided transition: 0 for z <= 0, exp((z-1)/z) on (0, 1), 1 from z = 1 on."""
    if z <= 0.0:
        return 0.0
    if z >= 1.0:
        return 1.0
    arg = (z - 1.0) / z
    if arg <= -_EXP_CLAMP:
        return 0.0
    return math.exp(arg)


def smooth_ramp_deriv(z: float) -> float:
    """Derivative of ``smooth_ramp``; zero outside the open interval (0, 1)."""
    if z <= 0.0 or z >= 1.0:
        return 0.0
    arg = (z - 1.0) / z
    if arg <= -_EXP_CLAMP + 20.0:
        return 0.0
    return math.exp(arg) / (z * z)


def smooth_step(z: float) -> float:
    """Double-sided transition: 0 for z <= 0, 1 for z >= 1, strictly rising between."""
    if z <= 0.0:
        return 0.0
    if z >= 1.0:
        return 1.0
    arg = (1.0 - 2.0 * z) / (z * (1.0 - z))
    if arg >= _EXP_CLAMP:
        return 0.0
    if arg <= -_EXP_CLAMP:
        return 1.0
    return 1.0 / (math.exp(arg) + 1.0)


def smooth_step_deriv(z: float) -> float:
    """Derivative of ``smooth_step``; zero outside the open interval (0, 1)."""
    if z <= 0.0 or z >= 1.0:
        return 0.0
    arg = (1.0 - 2.0 * z) / (z * (1.0 - z))
    if abs(arg) >= _EXP_CLAMP - 10.0:
        return 0.0
    w = math.exp(-abs(arg))
    span = z * (1.0 - z)
    return (2.0 * z * z - 2.0 * z + 1.0) * w / (span * span * (1.0 + w) * (1.0 + w))


def smooth_vee(z: float) -> float:
    """Even transition: 0 at the origin, 1 for |z| >= 1, flat to all orders at 0."""
    return smooth_step(abs(z))


def smooth_vee_deriv(z: float) -> float:
    """Derivative of ``smooth_vee``: odd, carries the sign of z."""
    if z == 0.0:
        return 0.0
    d = smooth_step_deriv(abs(z))
    return d if z > 0.0 else -d


@dataclass(frozen=True)
class Envelope:
    """Smoothly shrinking bound: starts at ``start``, settles to ``floor`` by ``settle``.

    value(t) = (start - floor) * smooth_ramp((settle - t) / settle) + floor
    """

    start: float
    floor: float
    settle: float

    def __post_init__(self) -> None:
        if not (self.start > self.floor > 0.0):
            raise ValueError(
                f"envelope needs start > floor > 0, got start={self.start}, floor={self.floor}"
            )
        if not self.settle > 0.0:
            raise ValueError(f"envelope needs settle > 0, got settle={self.settle}")

    def value(self, t: float) -> float:
        return (self.start - self.floor) * smooth_ramp((self.settle - t) / self.settle) + self.floor

    def slope(self, t: float) -> float:
        """Time derivative of ``value``; non-positive, exactly zero once settled."""
        if t < 0.0 or t >= self.settle:
            return 0.0
        rem = self.settle - t
        arg = -t / rem
        if arg <= -_EXP_CLAMP + 20.0:
            return 0.0
        return -(self.start - self.floor) * self.settle / (rem * rem) * math.exp(arg)
