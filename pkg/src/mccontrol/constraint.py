"""Constraint-region geometry around the zero manifold.

The zero manifold in the (s_(n-1), ds_(n-1)) plane is translated laterally,
longitudinally, or obliquely by time-shrinking offsets to form a constraint
region.  The constraint variable xi measures where the state sits between the
two translated boundaries, normalised to (-1, 1).  The flexible variant
expands the boundaries just enough to keep the state a fixed margin inside
them (needed while the actuator saturates) and restores them exactly, bit for
bit, once the state re-enters the nominal region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import NumericDomainError
from .manifold import ManifoldChain
from .transition import Envelope, smooth_step

LATERAL = "lateral"
LONGITUDINAL = "longitudinal"
OBLIQUE = "oblique"

KINDS = (LATERAL, LONGITUDINAL, OBLIQUE)

INSIDE = "inside"
OUTSIDE_UPPER = "outside_upper"
OUTSIDE_LOWER = "outside_lower"

_BRACKET_GROWTHS = 64
_BISECT_ITERS = 200


@dataclass(frozen=True)
class ConstraintGeometry:
    """Symmetric boundary offsets for one constraint kind.

    ``lateral`` is the horizontal half-width x_U(t) = -x_L(t); ``vertical``
    the vertical half-width y_U(t) = -y_L(t).  Offsets not used by the kind
    are None and read as zero.
    """

    kind: str
    lateral: Envelope | None = None
    vertical: Envelope | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown constraint kind {self.kind!r}")
        if self.kind == LATERAL and not (self.lateral and self.vertical is None):
            raise ValueError("lateral constraint needs a lateral offset only")
        if self.kind == LONGITUDINAL and not (self.vertical and self.lateral is None):
            raise ValueError("longitudinal constraint needs a vertical offset only")
        if self.kind == OBLIQUE and not (self.lateral and self.vertical):
            raise ValueError("oblique constraint needs both offsets")

    def x_upper(self, t: float) -> float:
        return self.lateral.value(t) if self.lateral is not None else 0.0

    def y_upper(self, t: float) -> float:
        return self.vertical.value(t) if self.vertical is not None else 0.0


def make_geometry(
    kind: str,
    chain: ManifoldChain,
    z0: Sequence[float],
    *,
    margin_gain: float,
    settle: float,
    floor_x: float = 0.0,
    floor_y: float = 0.0,
) -> ConstraintGeometry:
    """Size the boundary envelopes from the initial (estimated) error vector.

    Each envelope starts at margin_gain times the initial distance of the
    state from the zero manifold (clamped from below by its floor) so the
    initial state always sits strictly inside the region; margin_gain > 1.
    """
    if not margin_gain > 1.0:
        raise ValueError(f"margin_gain must exceed 1, got {margin_gain}")
    s_vals, sd = chain.evaluate(z0)
    s_prev = s_vals[-2]
    law = chain.laws[-1]
    lateral = vertical = None
    if kind in (LATERAL, OBLIQUE):
        if not floor_x > 0.0:
            raise ValueError("lateral offset needs floor_x > 0")
        start_x = abs(law.inverse(sd) - s_prev)
        lateral = Envelope(margin_gain * max(start_x, floor_x), floor_x, settle)
    if kind in (LONGITUDINAL, OBLIQUE):
        if not floor_y > 0.0:
            raise ValueError("longitudinal offset needs floor_y > 0")
        start_y = abs(law.value(s_prev) - sd)
        vertical = Envelope(margin_gain * max(start_y, floor_y), floor_y, settle)
    return ConstraintGeometry(kind, lateral, vertical)


@dataclass
class FlexState:
    """Per-simulation flexible-boundary scratchpad.

    ``margin`` is the guaranteed gap kept between the state and the expanded
    boundary; the remaining fields are diagnostics of the last evaluation.
    """

    margin: float
    blend: float = 0.0
    distance: float = 0.0
    cap: float = 0.0
    x_upper: float = 0.0
    y_upper: float = 0.0

    def __post_init__(self) -> None:
        if not self.margin > 0.0:
            raise ValueError(f"flex margin must be positive, got {self.margin}")


def oblique_intersection(
    geom: ConstraintGeometry,
    chain: ManifoldChain,
    s_prev: float,
    sd_prev: float,
    t: float,
) -> tuple[float, float]:
    """Intersection of the oblique gradient line through the state with the manifold.

    Solves x_U * (law(x_c) - sd_prev) = y_U * (x_c - s_prev); the left side is
    strictly decreasing in x_c so the root is unique.
    """
    law = chain.laws[-1]
    x_u = geom.x_upper(t)
    y_u = geom.y_upper(t)
    if not x_u > 0.0:
        raise NumericDomainError("oblique intersection needs a positive lateral offset")

    def resid(x: float) -> float:
        return x_u * (law.value(x) - sd_prev) - y_u * (x - s_prev)

    r = 1.0
    for _ in range(_BRACKET_GROWTHS):
        if resid(s_prev - r) >= 0.0 >= resid(s_prev + r):
            break
        r *= 2.0
    else:
        raise NumericDomainError(f"intersection bracket grew to +/-{r:.3g} without a sign change")
    lo, hi = s_prev - r, s_prev + r
    mid = s_prev
    for _ in range(_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        f = resid(mid)
        if f == 0.0:
            break
        if f > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-13 * max(1.0, abs(mid)) and abs(f) <= 1e-12:
            break
    return mid, law.value(mid)


def constraint_variable(
    geom: ConstraintGeometry, chain: ManifoldChain, z: Sequence[float], t: float
) -> float:
    """Rigid constraint variable: -1 on the lower boundary, +1 on the upper."""
    s_vals, sd = chain.evaluate(z)
    law = chain.laws[-1]
    if geom.kind == LONGITUDINAL:
        return s_vals[-1] / geom.y_upper(t)
    if geom.kind == LATERAL:
        return (s_vals[-2] - law.inverse(sd)) / geom.x_upper(t)
    x_c, _ = oblique_intersection(geom, chain, s_vals[-2], sd, t)
    return (s_vals[-2] - x_c) / geom.x_upper(t)


def _flexible_from_manifold(
    geom: ConstraintGeometry,
    flex: FlexState,
    chain: ManifoldChain,
    s_vals: Sequence[float],
    sd: float,
    t: float,
) -> tuple[float, float]:
    """Flexible constraint variable from precomputed manifold coordinates.

    Returns (xi, signed constrained quantity) and refreshes ``flex``.
    """
    margin = flex.margin
    if geom.kind == LONGITUDINAL:
        signed = s_vals[-1]
        dist = abs(signed)
        cap = geom.y_upper(t)
        blend = smooth_step((dist - (cap - margin)) / margin)
        upper = (1.0 - blend) * cap + blend * (dist + margin)
        flex.x_upper = 0.0
        flex.y_upper = upper
        xi = signed / upper
    elif geom.kind == LATERAL:
        signed = s_vals[-2] - chain.laws[-1].inverse(sd)
        dist = abs(signed)
        cap = geom.x_upper(t)
        blend = smooth_step((dist - (cap - margin)) / margin)
        upper = (1.0 - blend) * cap + blend * (dist + margin)
        flex.x_upper = upper
        flex.y_upper = 0.0
        xi = signed / upper
    else:
        x_c, y_c = oblique_intersection(geom, chain, s_vals[-2], sd, t)
        signed = s_vals[-2] - x_c
        x_u = geom.x_upper(t)
        y_u = geom.y_upper(t)
        dist = math.hypot(signed, sd - y_c)
        cap = math.hypot(x_u, y_u)
        blend = smooth_step((dist - (cap - margin)) / margin)
        scale = (1.0 - blend) + blend * (dist + margin) / cap
        flex.x_upper = x_u * scale
        flex.y_upper = y_u * scale
        xi = signed / flex.x_upper
    flex.blend = blend
    flex.distance = dist
    flex.cap = cap
    return xi, signed


def flexible_variable(
    geom: ConstraintGeometry,
    flex: FlexState,
    chain: ManifoldChain,
    z: Sequence[float],
    t: float,
) -> tuple[float, FlexState]:
    """Flexible constraint variable; expands boundaries only while needed."""
    s_vals, sd = chain.evaluate(z)
    xi, _ = _flexible_from_manifold(geom, flex, chain, s_vals, sd, t)
    return xi, flex


def classify_region(
    geom: ConstraintGeometry, chain: ManifoldChain, z: Sequence[float], t: float
) -> str:
    """Place the state relative to the rigid translated boundaries."""
    s_vals, sd = chain.evaluate(z)
    law = chain.laws[-1]
    s_prev = s_vals[-2]
    x_u = geom.x_upper(t)
    y_u = geom.y_upper(t)
    upper = sd - law.value(s_prev - x_u) - y_u
    if upper >= 0.0:
        return OUTSIDE_UPPER
    lower = sd - law.value(s_prev + x_u) + y_u
    if lower <= 0.0:
        return OUTSIDE_LOWER
    return INSIDE
