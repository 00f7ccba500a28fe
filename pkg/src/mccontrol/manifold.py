"""Negative-feedback laws, skewed variants, and the iterated error manifold.

A feedback law h maps a scalar coordinate to a strictly decreasing, odd
command with h(0) = 0.  Skews shift a fast law vertically by +/- offset away
from the origin (so boundary constraints translate into a presettable steady
accuracy) and can optionally replace the law near zero by a linear segment to
remove derivative singularities.  Chaining n-1 laws builds the manifold
coordinates s_1..s_n of an n-th order error vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

from .errors import NumericDomainError
from .transition import smooth_step, smooth_step_deriv, smooth_vee, smooth_vee_deriv

_BRACKET_GROWTHS = 64
_BISECT_ITERS = 200
_BISECT_XTOL = 1e-12


def signed_pow(z: float, p: float) -> float:
    """sign(z) * |z|**p with 0**p defined as 0 for every p > 0."""
    if z == 0.0:
        return 0.0
    return math.copysign(abs(z) ** p, z)


@dataclass(frozen=True)
class LinearLaw:
    """h(s) = -slope * s."""

    slope: float

    def __post_init__(self) -> None:
        if not self.slope > 0.0:
            raise ValueError(f"linear law needs slope > 0, got {self.slope}")

    def value(self, s: float) -> float:
        return -self.slope * s

    def deriv(self, s: float) -> float:
        return -self.slope


@dataclass(frozen=True)
class FiniteTimeLaw:
    """h(s) = -gain * sign(s) * |s|**exponent with 0 < exponent < 1.

    The derivative diverges at s = 0; it is reported as -inf there.
    """

    gain: float
    exponent: float

    def __post_init__(self) -> None:
        if not self.gain > 0.0:
            raise ValueError(f"finite-time law needs gain > 0, got {self.gain}")
        if not 0.0 < self.exponent < 1.0:
            raise ValueError(f"finite-time law needs exponent in (0, 1), got {self.exponent}")

    def value(self, s: float) -> float:
        return -self.gain * signed_pow(s, self.exponent)

    def deriv(self, s: float) -> float:
        if s == 0.0:
            return -math.inf
        return -self.gain * self.exponent * abs(s) ** (self.exponent - 1.0)


@dataclass(frozen=True)
class VariableExponentLaw:
    """h(s) = -gain * sign(s) * |s|**p(s) with a state-dependent exponent.

    p(s) = a s^2 / (1 + b s^2) + exp_zero rises continuously from exp_zero at
    the origin through exp_unit at |s| = 1 towards exp_limit at infinity,
    where b = (exp_unit - exp_zero) / (exp_limit - exp_unit) and
    a = (exp_limit - exp_zero) * b.  Keeping exp_zero > 0 keeps the law
    continuous through the origin.
    """

    gain: float
    exp_zero: float
    exp_unit: float
    exp_limit: float

    def __post_init__(self) -> None:
        if not self.gain > 0.0:
            raise ValueError(f"variable-exponent law needs gain > 0, got {self.gain}")
        if not 0.0 < self.exp_zero < 1.0 < self.exp_unit < self.exp_limit:
            raise ValueError(
                "variable-exponent law needs 0 < exp_zero < 1 < exp_unit < exp_limit, got "
                f"({self.exp_zero}, {self.exp_unit}, {self.exp_limit})"
            )

    @property
    def _b(self) -> float:
        return (self.exp_unit - self.exp_zero) / (self.exp_limit - self.exp_unit)

    @property
    def _a(self) -> float:
        return (self.exp_limit - self.exp_zero) * self._b

    def exponent(self, s: float) -> float:
        s2 = s * s
        return self._a * s2 / (1.0 + self._b * s2) + self.exp_zero

    def value(self, s: float) -> float:
        return -self.gain * signed_pow(s, self.exponent(s))

    def deriv(self, s: float) -> float:
        if s == 0.0:
            return -math.inf
        a = abs(s)
        p = self.exponent(s)
        den = 1.0 + self._b * a * a
        exp_slope = 2.0 * self._a * a / (den * den)
        return -self.gain * a ** p * (exp_slope * math.log(a) + p / a)


@dataclass(frozen=True)
class FixedTimeLaw:
    """h(s) = -gain_low * sign(s)|s|**exp_low - gain_high * sign(s)|s|**exp_high.

    Requires 0 < exp_low < 1 < exp_high: the low power dominates near the
    origin, the high power dominates far away.
    """

    gain_low: float
    gain_high: float
    exp_low: float
    exp_high: float

    def __post_init__(self) -> None:
        if not (self.gain_low > 0.0 and self.gain_high > 0.0):
            raise ValueError("fixed-time law needs positive gains")
        if not 0.0 < self.exp_low < 1.0 < self.exp_high:
            raise ValueError(
                f"fixed-time law needs 0 < exp_low < 1 < exp_high, got "
                f"({self.exp_low}, {self.exp_high})"
            )

    def value(self, s: float) -> float:
        return -self.gain_low * signed_pow(s, self.exp_low) - self.gain_high * signed_pow(
            s, self.exp_high
        )

    def deriv(self, s: float) -> float:
        if s == 0.0:
            return -math.inf
        a = abs(s)
        return -(
            self.gain_low * self.exp_low * a ** (self.exp_low - 1.0)
            + self.gain_high * self.exp_high * a ** (self.exp_high - 1.0)
        )


FeedbackLaw = Union[LinearLaw, FiniteTimeLaw, VariableExponentLaw, FixedTimeLaw]


@dataclass(frozen=True)
class SmoothSkew:
    """Vertical +/- offset blended over |s| <= width; keeps any base singularity."""

    offset: float
    width: float

    def __post_init__(self) -> None:
        if not (self.offset > 0.0 and self.width > 0.0):
            raise ValueError("smooth skew needs offset > 0 and width > 0")


@dataclass(frozen=True)
class NonsingularSkew:
    """Vertical offset plus a linear segment through the origin.

    Inside |s| < width the skewed law is faded out in favour of a straight
    line of slope -k, k = slope_scale * (offset - base(width)) / width, which
    makes the combined law differentiable at 0 even for singular bases.
    """

    offset: float
    width: float
    slope_scale: float

    def __post_init__(self) -> None:
        if not (self.offset > 0.0 and self.width > 0.0 and self.slope_scale > 0.0):
            raise ValueError("nonsingular skew needs positive offset, width, slope_scale")


Skew = Union[SmoothSkew, NonsingularSkew, None]


@dataclass(frozen=True)
class SkewedLaw:
    """A feedback law with an optional skew applied; still odd and decreasing."""

    base: FeedbackLaw
    skew: Skew = None

    def _offset_blend(self, s: float) -> float:
        # ranges over +1 for s <= -width down to -1 for s >= width, 0 at 0
        w = self.skew.width
        return 1.0 - 2.0 * smooth_step((s + w) / (2.0 * w))

    def _offset_blend_deriv(self, s: float) -> float:
        w = self.skew.width
        return -smooth_step_deriv((s + w) / (2.0 * w)) / w

    @property
    def origin_slope(self) -> float:
        """Magnitude of the linear-segment slope of a nonsingular skew."""
        if not isinstance(self.skew, NonsingularSkew):
            raise ValueError("origin_slope is defined only for nonsingular skews")
        k = self.skew
        return k.slope_scale * (k.offset - self.base.value(k.width)) / k.width

    def value(self, s: float) -> float:
        if self.skew is None:
            return self.base.value(s)
        shifted = self.base.value(s) + self.skew.offset * self._offset_blend(s)
        if isinstance(self.skew, SmoothSkew):
            return shifted
        fade = smooth_vee(s / self.skew.width)
        if fade == 0.0:
            return -self.origin_slope * s
        return fade * shifted - (1.0 - fade) * self.origin_slope * s

    def deriv(self, s: float) -> float:
        if self.skew is None:
            return self.base.deriv(s)
        if isinstance(self.skew, SmoothSkew):
            return self.base.deriv(s) + self.skew.offset * self._offset_blend_deriv(s)
        fade = smooth_vee(s / self.skew.width)
        k = self.origin_slope
        if fade == 0.0:
            return -k
        shifted = self.base.value(s) + self.skew.offset * self._offset_blend(s)
        fade_d = smooth_vee_deriv(s / self.skew.width) / self.skew.width
        shifted_d = self.base.deriv(s) + self.skew.offset * self._offset_blend_deriv(s)
        return fade_d * (shifted + k * s) + fade * shifted_d - (1.0 - fade) * k

    def inverse(self, y: float) -> float:
        """Solve value(x) = y; closed form where available, else bisection."""
        if self.skew is None and isinstance(self.base, FiniteTimeLaw):
            return -signed_pow(y / self.base.gain, 1.0 / self.base.exponent)
        return self._bisect_inverse(y)

    def _bisect_inverse(self, y: float) -> float:
        r = 1.0
        for _ in range(_BRACKET_GROWTHS):
            if self.value(-r) >= y >= self.value(r):
                break
            r *= 2.0
        else:
            raise NumericDomainError(f"inverse bracket grew to +/-{r:.3g} without enclosing y={y:.6g}")
        lo, hi = -r, r
        mid = 0.0
        for _ in range(_BISECT_ITERS):
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            f = self.value(mid) - y
            if f == 0.0:
                return mid
            if f > 0.0:
                lo = mid
            else:
                hi = mid
            if hi - lo <= _BISECT_XTOL and abs(f) <= 1e-12:
                break
        return mid


@dataclass(frozen=True)
class ManifoldChain:
    """Iterated manifold built from n-1 skewed laws for an order-n error vector.

    s_1 = z_1 and s_i = ds_(i-1)/dt - law_(i-1)(s_(i-1)); orders 2 and 3 are
    supported (higher orders would need higher law derivatives).
    """

    laws: tuple[SkewedLaw, ...]

    def __post_init__(self) -> None:
        if len(self.laws) not in (1, 2):
            raise ValueError(f"supported orders are 2 and 3, got order {len(self.laws) + 1}")

    @property
    def order(self) -> int:
        return len(self.laws) + 1

    def evaluate(self, z: Sequence[float]) -> tuple[list[float], float]:
        """Return ([s_1..s_n], ds_(n-1)/dt) for the error vector z."""
        n = self.order
        if len(z) != n:
            raise ValueError(f"error vector has length {len(z)}, expected {n}")
        s1 = z[0]
        if n == 2:
            sd = z[1]
            return [s1, sd - self.laws[0].value(s1)], sd
        s2 = z[1] - self.laws[0].value(s1)
        sd2 = z[2] - self.laws[0].deriv(s1) * z[1]
        return [s1, s2, sd2 - self.laws[1].value(s2)], sd2
