"""Barrier controller, actuator saturation, and analytic settling bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .constraint import LONGITUDINAL, ConstraintGeometry, FlexState, _flexible_from_manifold
from .errors import NumericDomainError
from .manifold import (
    FiniteTimeLaw,
    FixedTimeLaw,
    ManifoldChain,
    SkewedLaw,
    VariableExponentLaw,
)

BARRIER_LOG = "log_ratio"
BARRIER_RATIONAL = "rational"

# the controller clamps xi just inside the open interval; clamp events are
# counted and must stay at zero in healthy runs
XI_LIMIT = 1.0 - 1e-12


def barrier(kind: str, xi: float) -> float:
    """Odd, strictly increasing map from (-1, 1) onto the whole real line."""
    if not -1.0 < xi < 1.0:
        raise NumericDomainError(f"barrier argument {xi!r} outside (-1, 1)")
    if kind == BARRIER_LOG:
        return math.log((1.0 + xi) / (1.0 - xi))
    if kind == BARRIER_RATIONAL:
        return xi / ((1.0 + xi) * (1.0 - xi))
    raise ValueError(f"unknown barrier kind {kind!r}")


@dataclass(frozen=True)
class Actuator:
    """Hard input limits lower < 0 < upper (use +/-inf for an unconstrained axis)."""

    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not self.lower < 0.0 < self.upper:
            raise ValueError(f"actuator needs lower < 0 < upper, got ({self.lower}, {self.upper})")


def saturate(act: Actuator, v: float) -> float:
    if v < act.lower:
        return act.lower
    if v > act.upper:
        return act.upper
    return v


@dataclass
class StepDiag:
    """Everything the controller knew in one evaluation."""

    v: float
    xi: float
    clamped: bool
    s_values: tuple[float, ...]
    s_dot_prev: float
    s_signed: float
    bound_upper: float
    bound_lower: float
    blend: float


@dataclass
class Controller:
    """Memoryless barrier controller v = -gain * barrier(xi) over flexible bounds."""

    gain: float
    geometry: ConstraintGeometry
    flex: FlexState
    chain: ManifoldChain
    barrier_kind: str = BARRIER_LOG
    clamp_events: int = field(default=0, repr=False)

    def __post_init__(self) -> None:
        if not self.gain > 0.0:
            raise ValueError(f"controller gain must be positive, got {self.gain}")

    def command(self, z, t: float) -> StepDiag:
        s_vals, sd = self.chain.evaluate(z)
        xi, signed = _flexible_from_manifold(self.geometry, self.flex, self.chain, s_vals, sd, t)
        clamped = False
        if xi > XI_LIMIT:
            xi = XI_LIMIT
            clamped = True
        elif xi < -XI_LIMIT:
            xi = -XI_LIMIT
            clamped = True
        if clamped:
            self.clamp_events += 1
        v = -self.gain * barrier(self.barrier_kind, xi)
        upper = self.flex.y_upper if self.geometry.kind == LONGITUDINAL else self.flex.x_upper
        return StepDiag(
            v=v,
            xi=xi,
            clamped=clamped,
            s_values=tuple(s_vals),
            s_dot_prev=sd,
            s_signed=signed,
            bound_upper=upper,
            bound_lower=-upper,
            blend=self.flex.blend,
        )


def settling_bound_finite_time(gain: float, exponent: float, z1_0: float, settle: float) -> float:
    """Upper bound on the time for |z1| to reach the preset accuracy."""
    return settle + abs(z1_0) ** (1.0 - exponent) / (gain * (1.0 - exponent))


def settling_bound_variable_exponent(
    gain: float, exp_zero: float, exp_unit: float, exp_limit: float, settle: float
) -> float:
    """Fixed-time bound: independent of the initial state."""
    b = (exp_unit - exp_zero) / (exp_limit - exp_unit)
    a = (exp_limit - exp_zero) * b
    slow = gain * math.exp(-a / (2.0 * math.e)) * (1.0 - exp_zero)
    return settle + 1.0 / (gain * (exp_unit - 1.0)) + 1.0 / slow


def settling_bound_recursive(laws, settle: float) -> float:
    """Fixed-time bound for a chain of dual-power laws, summed over stages."""
    total = settle
    for law in laws:
        total += 1.0 / (law.gain_low * (1.0 - law.exp_low))
        total += 1.0 / (law.gain_high * (law.exp_high - 1.0))
    return total


def settling_bound(laws: tuple[SkewedLaw, ...], z1_0: float, settle: float) -> float | None:
    """Dispatch on the law family; None when no analytic bound applies."""
    bases = [law.base for law in laws]
    if all(isinstance(b, FixedTimeLaw) for b in bases):
        return settling_bound_recursive(bases, settle)
    if len(bases) == 1 and isinstance(bases[0], FiniteTimeLaw):
        return settling_bound_finite_time(bases[0].gain, bases[0].exponent, z1_0, settle)
    if len(bases) == 1 and isinstance(bases[0], VariableExponentLaw):
        b = bases[0]
        return settling_bound_variable_exponent(b.gain, b.exp_zero, b.exp_unit, b.exp_limit, settle)
    return None
