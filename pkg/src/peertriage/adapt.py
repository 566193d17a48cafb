"""Adaptive criterion calibration: a damped proportional loop on x_c.

The loop drives the observed fraud-acceptance rate toward a budget by moving
the criterion location between rounds.  Raising x_c is more conservative
(C grows, beta grows); lowering it is more permissive.  The error in rate
units is converted to criterion units through the local likelihood ratio
(the ROC slope at the operating point), clamped so steps stay sane at
extreme criteria.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

from .errors import ConfigurationError
from .sdt import SdtMetrics


@dataclass(frozen=True)
class AdaptPolicy:
    fa_budget: float = 0.05
    eta: float = 2.0
    deadband: float = 0.005
    max_step: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.fa_budget < 1.0:
            raise ConfigurationError(f"fa_budget must be in (0, 1), got {self.fa_budget}")
        if self.eta <= 0 or self.max_step <= 0:
            raise ConfigurationError("eta and max_step must be > 0")
        if self.deadband < 0:
            raise ConfigurationError("deadband must be >= 0")

    def to_dict(self) -> dict:
        return {"fa_budget": self.fa_budget, "eta": self.eta,
                "deadband": self.deadband, "max_step": self.max_step}

    @classmethod
    def from_dict(cls, d: dict) -> "AdaptPolicy":
        return cls(**d)


class HistoryEntry(NamedTuple):
    round: int
    x_c: float
    observed_fa: float
    observed_hit: float
    beta: float


@dataclass(frozen=True)
class CalibrationState:
    round: int = 0
    x_c: float = 0.0
    history: tuple[HistoryEntry, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {"round": self.round, "x_c": self.x_c,
                "history": [list(h) for h in self.history]}


_SLOPE_CLAMP = (0.5, 5.0)


def update_criterion(state: CalibrationState, round_metrics: SdtMetrics,
                     policy: AdaptPolicy) -> CalibrationState:
    """Advance the calibration by one round.

    Positive error (too much fraud accepted) raises x_c.  The step is
    eta * error / slope, where slope is the ROC slope at the observed
    operating point (= beta) clamped to [0.5, 5], then bounded by max_step.
    Returns a new state; the input state is left untouched.
    """
    fa = round_metrics.fa
    hit = round_metrics.hit
    if not (math.isfinite(fa) and math.isfinite(hit)):
        raise ValueError("round metrics must be finite")
    error = fa - policy.fa_budget
    if abs(error) <= policy.deadband:
        step = 0.0
    else:
        slope = min(max(round_metrics.beta, _SLOPE_CLAMP[0]), _SLOPE_CLAMP[1])
        step = policy.eta * error / slope
        step = min(max(step, -policy.max_step), policy.max_step)
    entry = HistoryEntry(round=state.round, x_c=state.x_c, observed_fa=fa,
                         observed_hit=hit, beta=round_metrics.beta)
    return replace(state, round=state.round + 1, x_c=state.x_c + step,
                   history=state.history + (entry,))


def has_converged(state: CalibrationState, window: int, tol: float) -> bool:
    """True when x_c varied by at most tol over the last ``window`` rounds."""
    if window < 2:
        raise ConfigurationError(f"window must be >= 2, got {window}")
    if tol < 0:
        raise ConfigurationError(f"tol must be >= 0, got {tol}")
    if len(state.history) < window:
        return False
    xs = [h.x_c for h in state.history[-window:]]
    return max(xs) - min(xs) <= tol
