"""Degree-of-novelty scoring over rule-state statistics.

The corpus-level measure is the mean per-rule Shannon entropy of the observed
rule states, in bits.  The per-manuscript measure is the mean self-information
of that manuscript's own rule states, so rare state combinations score high
and get flagged for the human supervisor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .errors import ConfigurationError, ValidationError
from .rules import RuleOutcome

DEFAULT_SCORE_BINS = 8


class FlagLevel(str, Enum):
    LOW = "low"
    MODERATE = "moderate"
    HIGH = "high"


_FLAG_ORDER = {FlagLevel.LOW: 0, FlagLevel.MODERATE: 1, FlagLevel.HIGH: 2}


def flag_rank(level: FlagLevel) -> int:
    """Ordering key: low < moderate < high."""
    return _FLAG_ORDER[level]


@dataclass(frozen=True)
class NoveltyFlag:
    level: FlagLevel
    bits: float

    @property
    def rank(self) -> int:
        return _FLAG_ORDER[self.level]

    def to_dict(self) -> dict:
        return {"level": self.level.value, "bits": self.bits}


@dataclass(frozen=True)
class NoveltyScore:
    """Per-manuscript novelty in bits, with ceiling-substitution metadata."""

    bits: float
    ceiling_substitutions: int = 0

    def __float__(self) -> float:
        return self.bits


@dataclass(frozen=True)
class ProbTable:
    """Per-rule probability distributions over observed rule states.

    ``mode`` is "bits" when states are the 0/1 rule outcomes and "bins" when
    states are equal-width bins over the rule scores.
    """

    tables: tuple[Mapping[str, float], ...]
    mode: str = "bits"
    bins: int = DEFAULT_SCORE_BINS
    n_observations: int | None = None

    def __post_init__(self):
        if not self.tables:
            raise ValidationError("a probability table needs at least one rule")
        if self.mode not in ("bits", "bins"):
            raise ConfigurationError(f"unknown ProbTable mode {self.mode!r}")
        for j, table in enumerate(self.tables):
            if not table:
                raise ValidationError(f"rule {j} has an empty state distribution")
            total = math.fsum(table.values())
            if any(p < 0 for p in table.values()):
                raise ValidationError(f"rule {j} has a negative probability")
            if abs(total - 1.0) > 1e-12:
                raise ValidationError(
                    f"rule {j} probabilities sum to {total}, not 1")

    @property
    def n_rules(self) -> int:
        return len(self.tables)

    def states_of(self, o: RuleOutcome) -> tuple[str, ...]:
        """The manuscript's per-rule state keys under this table's mode."""
        if len(o.bits) != self.n_rules:
            raise ValidationError(
                f"outcome has {len(o.bits)} rules, table has {self.n_rules}")
        if self.mode == "bits":
            return tuple(o.bits)
        return tuple(str(min(int(s * self.bins), self.bins - 1)) for s in o.scores)

    @classmethod
    def from_outcomes(cls, outcomes: Sequence[RuleOutcome]) -> "ProbTable":
        """Binary-state distributions from observed rule outcomes."""
        if not outcomes:
            raise ValidationError("need at least one outcome")
        n_rules = len(outcomes[0].bits)
        counts = [{} for _ in range(n_rules)]
        for o in outcomes:
            for j, b in enumerate(o.bits):
                counts[j][b] = counts[j].get(b, 0) + 1
        n = len(outcomes)
        tables = tuple({s: c / n for s, c in sorted(t.items())} for t in counts)
        return cls(tables=tables, mode="bits", n_observations=n)

    @classmethod
    def from_scores(cls, outcomes: Sequence[RuleOutcome],
                    bins: int = DEFAULT_SCORE_BINS) -> "ProbTable":
        """Binned score distributions from observed rule outcomes."""
        if not outcomes:
            raise ValidationError("need at least one outcome")
        if bins < 1:
            raise ConfigurationError("bins must be >= 1")
        n_rules = len(outcomes[0].scores)
        counts = [{} for _ in range(n_rules)]
        for o in outcomes:
            for j, s in enumerate(o.scores):
                key = str(min(int(s * bins), bins - 1))
                counts[j][key] = counts[j].get(key, 0) + 1
        n = len(outcomes)
        tables = tuple({s: c / n for s, c in sorted(t.items())} for t in counts)
        return cls(tables=tables, mode="bins", bins=bins, n_observations=n)


def corpus_novelty(pt: ProbTable) -> float:
    """Mean per-rule Shannon entropy in bits."""
    total = 0.0
    for table in pt.tables:
        h = -math.fsum(p * math.log2(p) for p in table.values() if p > 0.0)
        total += h
    return total / pt.n_rules


def manuscript_novelty(o: RuleOutcome, pt: ProbTable,
                       ceiling: float | None = None) -> NoveltyScore:
    """Mean self-information of the manuscript's rule states, in bits.

    States unseen in the table (probability zero) contribute the ceiling
    value, log2 of the observation count by default; substitutions are
    counted in the result rather than raised.
    """
    if ceiling is None:
        n = pt.n_observations if pt.n_observations and pt.n_observations >= 2 else 2
        ceiling = math.log2(n)
    total = 0.0
    substituted = 0
    for j, state in enumerate(pt.states_of(o)):
        p = pt.tables[j].get(state, 0.0)
        if p <= 0.0:
            total += ceiling
            substituted += 1
        else:
            total += -math.log2(p)
    return NoveltyScore(bits=total / pt.n_rules,
                        ceiling_substitutions=substituted)


def flag_novelty(value_bits: float,
                 thresholds: tuple[float, float]) -> NoveltyFlag:
    """Map a novelty value to a low/moderate/high flag."""
    t_mod, t_high = thresholds
    if not (0.0 <= t_mod < t_high):
        raise ConfigurationError(
            f"novelty thresholds must satisfy 0 <= t_mod < t_high, got "
            f"({t_mod}, {t_high})")
    if value_bits < t_mod:
        level = FlagLevel.LOW
    elif value_bits < t_high:
        level = FlagLevel.MODERATE
    else:
        level = FlagLevel.HIGH
    return NoveltyFlag(level=level, bits=value_bits)
