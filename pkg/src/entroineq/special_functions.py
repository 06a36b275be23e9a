"""Gamma, Beta, and Stirling evaluation backing every closed-form constant.

Constant assembly elsewhere in the library happens in log space, because
the Gamma arguments grow like 1/|1 - alpha| as the entropy order
approaches 1 and the linear-scale values overflow long before the
constants built from them do.  The primitive here is therefore
``log_gamma``; ``beta`` is a log-Gamma difference.

``stirling_gamma`` is the asymptotic approximation
sqrt(2*pi) * exp(-x) * x**(x - 1/2).  It is deliberately approximate and
is never used inside constant computation; it exists to reproduce the
limiting argument that connects the Renyi-entropy constant to the
Shannon one.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

__all__ = [
    "SpecialValue",
    "log_gamma",
    "gamma",
    "beta",
    "log_beta",
    "stirling_gamma",
]

# Largest x with exp(x) representable in float64.
_LOG_MAX = math.log(sys.float_info.max)

# math.gamma itself overflows slightly above this.
_GAMMA_LINEAR_MAX = 170.0


@dataclass(frozen=True)
class SpecialValue:
    """A positive scalar stored either directly or as its natural log.

    Gamma values at arguments like alpha/(alpha-1) exceed float range
    for alpha near 1, so oversized results are kept in log scale and
    only exponentiated on demand.
    """

    value: float
    log_scale: bool = False

    @property
    def log(self) -> float:
        """Natural log of the stored quantity."""
        return self.value if self.log_scale else math.log(self.value)

    def linear(self) -> float:
        """The plain (non-log) value; OverflowError if unrepresentable."""
        if not self.log_scale:
            return self.value
        if self.value > _LOG_MAX:
            raise OverflowError(
                f"value with log {self.value:.6g} does not fit in a float64"
            )
        return math.exp(self.value)


def _require_positive(name: str, x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise ValueError(f"{name} requires a positive finite argument, got {x!r}")
    return x


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0.

    Satisfies the recurrence log_gamma(x+1) = log(x) + log_gamma(x) to
    float accuracy on the whole positive axis.
    """
    x = _require_positive("log_gamma", x)
    return math.lgamma(x)


def gamma(x: float) -> SpecialValue:
    """Gamma(x) as a :class:`SpecialValue`, log-scale when it overflows."""
    x = _require_positive("gamma", x)
    if x <= _GAMMA_LINEAR_MAX:
        return SpecialValue(math.gamma(x))
    return SpecialValue(math.lgamma(x), log_scale=True)


def log_beta(x: float, y: float) -> float:
    """log B(x, y) = log_gamma(x) + log_gamma(y) - log_gamma(x + y)."""
    x = _require_positive("log_beta", x)
    y = _require_positive("log_beta", y)
    return math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y)


def beta(x: float, y: float) -> float:
    """Beta function B(x, y) for x, y > 0, via log-Gamma differences.

    The symmetric formula makes beta(x, y) == beta(y, x) exact as
    computed, not merely up to rounding.
    """
    return math.exp(log_beta(x, y))


def stirling_gamma(x: float) -> float:
    """Stirling approximation sqrt(2*pi) * e**(-x) * x**(x - 1/2).

    Kept separate from :func:`gamma`: this is the proof device for the
    alpha -> 1 limit, not an evaluation route for constants.  Returns
    +inf when the true value exceeds float range.
    """
    x = _require_positive("stirling_gamma", x)
    logv = 0.5 * math.log(2.0 * math.pi) - x + (x - 0.5) * math.log(x)
    if logv > _LOG_MAX:
        return math.inf
    return math.exp(logv)
