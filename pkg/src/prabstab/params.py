"""Parameter quadruple of the Prabhakar kernel and its admissible range."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParam


@dataclass(frozen=True)
class PrabhakarParams:
    """The quadruple (alpha, beta, gamma, omega) defining kernel and derivative.

    The constructor enforces the complete-monotonicity range

        omega < 0,   0 < alpha <= 1,   0 < alpha*gamma <= beta <= 1,

    under which the kernel t^(beta-1) E^gamma_{alpha,beta}(omega t^alpha) is
    completely monotonic and the stability theory applies.
    """

    alpha: float
    beta: float
    gamma: float
    omega: float

    def __post_init__(self):
        a, b, g, w = self.alpha, self.beta, self.gamma, self.omega
        for name, v in (("alpha", a), ("beta", b), ("gamma", g), ("omega", w)):
            if not math.isfinite(v):
                raise InvalidParam(f"{name} must be finite, got {v!r}")
        if not 0.0 < a <= 1.0:
            raise InvalidParam(f"requires 0 < alpha <= 1, got alpha={a}")
        if not a * g > 0.0:
            raise InvalidParam(f"requires alpha*gamma > 0, got alpha*gamma={a * g}")
        if not a * g <= b:
            raise InvalidParam(
                f"requires alpha*gamma <= beta, got alpha*gamma={a * g}, beta={b}"
            )
        if not b <= 1.0:
            raise InvalidParam(f"requires beta <= 1, got beta={b}")
        if not w < 0.0:
            raise InvalidParam(f"requires omega < 0, got omega={w}")

    @property
    def theta_max(self) -> float:
        """Right endpoint alpha*pi/2 of the boundary-curve parameter range."""
        return self.alpha * math.pi / 2.0

    @property
    def arg_min(self) -> float:
        """Argument of the boundary curve at theta = 0: (beta - alpha*gamma)*pi/2."""
        return (self.beta - self.alpha * self.gamma) * math.pi / 2.0

    @property
    def arg_sup(self) -> float:
        """Supremum beta*pi/2 of the boundary-curve argument."""
        return self.beta * math.pi / 2.0
