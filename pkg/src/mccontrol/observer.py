"""High-gain differentiator estimating the error vector from its first entry.

The estimate follows d/dt zhat_i = zhat_(i+1) + (a_i / mu^i) (z1 - zhat_1),
with the last row driven by the innovation alone.  The gains a_i must make
the polynomial x^n + a_1 x^(n-1) + ... + a_n Hurwitz; the time-scale mu sets
how aggressively the estimate converges (and how stiff the dynamics are).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class DifferentiatorConfig:
    gains: tuple[float, ...]
    time_scale: float

    def __post_init__(self) -> None:
        n = len(self.gains)
        if n not in (1, 2, 3):
            raise ValueError(f"differentiator supports orders 1-3, got {n}")
        if not all(a > 0.0 for a in self.gains):
            raise ValueError(f"differentiator gains must be positive, got {self.gains}")
        if not 0.0 < self.time_scale <= 1.0:
            raise ValueError(f"time_scale must lie in (0, 1], got {self.time_scale}")
        # Routh-Hurwitz: positivity suffices for orders 1-2, order 3 needs a1*a2 > a3
        if n == 3 and not self.gains[0] * self.gains[1] > self.gains[2]:
            raise ValueError(
                f"gains {self.gains} are not Hurwitz (need a1*a2 > a3 for order 3)"
            )

    @property
    def order(self) -> int:
        return len(self.gains)

    @property
    def scaled_gains(self) -> tuple[float, ...]:
        """Innovation gains a_i / mu^i."""
        return tuple(a / self.time_scale**i for i, a in enumerate(self.gains, start=1))


def differentiator_init(cfg: DifferentiatorConfig, z1: float) -> list[float]:
    """Start from the measured first entry, zeros for the derivatives."""
    return [z1] + [0.0] * (cfg.order - 1)


def differentiator_deriv(
    cfg: DifferentiatorConfig, est: Sequence[float], z1: float
) -> list[float]:
    n = cfg.order
    scaled = cfg.scaled_gains
    err = z1 - est[0]
    out = [est[i + 1] + scaled[i] * err for i in range(n - 1)]
    out.append(scaled[n - 1] * err)
    return out
