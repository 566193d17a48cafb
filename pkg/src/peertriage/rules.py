"""Minimal-criteria classifier: contingency-tree sort and score discriminant.

A ruleset thresholds each feature into a pass/fail bit and weights the raw
scores into a composite.  Triage happens either by looking the bit string up
in a contingency tree or by projecting the score vector onto a fitted linear
discriminant with two ordered cut points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Iterable, Mapping, Sequence

from .corpus import CATEGORIES, Manuscript, RuleCategory
from .errors import ConfigurationError, DegenerateFitError, ValidationError


class Direction(str, Enum):
    PASS_IF_GE = "ge"
    PASS_IF_LE = "le"


class TriageClass(str, Enum):
    FRAUDULENT = "fraudulent"
    BELOW_THRESHOLD = "below_threshold"
    ACCEPTABLE_NEEDS_WORK = "acceptable_needs_work"


@dataclass(frozen=True)
class Rule:
    category: RuleCategory
    threshold: float = 0.5
    direction: Direction = Direction.PASS_IF_GE

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigurationError(
                f"rule threshold must be in [0, 1], got {self.threshold!r}")

    def passes(self, score: float) -> bool:
        if self.direction is Direction.PASS_IF_GE:
            return score >= self.threshold
        return score <= self.threshold

    def to_dict(self) -> dict:
        return {"category": self.category.value, "threshold": self.threshold,
                "direction": self.direction.value}

    @classmethod
    def from_dict(cls, d: dict) -> "Rule":
        return cls(category=RuleCategory(d["category"]),
                   threshold=d.get("threshold", 0.5),
                   direction=Direction(d.get("direction", "ge")))


@dataclass(frozen=True)
class Ruleset:
    """Ordered rules; the order fixes tree levels and bit positions."""

    rules: tuple[Rule, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        if not self.rules:
            raise ConfigurationError("a ruleset needs at least one rule")
        if len(self.weights) != len(self.rules):
            raise ConfigurationError(
                f"{len(self.rules)} rules but {len(self.weights)} weights")

    def __len__(self) -> int:
        return len(self.rules)

    @classmethod
    def default(cls) -> "Ruleset":
        """One pass-if->=0.5 rule per category, uniform weights."""
        rules = tuple(Rule(category=c) for c in CATEGORIES)
        w = 1.0 / len(rules)
        return cls(rules=rules, weights=(w,) * len(rules))

    def to_dict(self) -> dict:
        return {"rules": [r.to_dict() for r in self.rules],
                "weights": list(self.weights)}

    @classmethod
    def from_dict(cls, d: dict) -> "Ruleset":
        rules = tuple(Rule.from_dict(r) for r in d["rules"])
        weights = tuple(d.get("weights") or [1.0 / len(rules)] * len(rules))
        return cls(rules=rules, weights=weights)


@dataclass(frozen=True)
class RuleOutcome:
    manuscript_id: str
    bits: str
    scores: tuple[float, ...]
    composite: float

    def __post_init__(self):
        if len(self.bits) != len(self.scores):
            raise ValidationError("bits and scores must have the same length")
        if any(b not in "01" for b in self.bits):
            raise ValidationError(f"bits must be a 0/1 string, got {self.bits!r}")


def evaluate_rules(m: Manuscript, rs: Ruleset) -> RuleOutcome:
    """Threshold each rule's feature and weight the scores into a composite."""
    bits = []
    scores = []
    composite = 0.0
    for rule, w in zip(rs.rules, rs.weights):
        if rule.category not in m.features:
            raise ValidationError(
                f"manuscript {m.id!r} is missing category {rule.category.value!r}")
        score = m.features[rule.category]
        bits.append("1" if rule.passes(score) else "0")
        scores.append(score)
        composite += w * score
    return RuleOutcome(manuscript_id=m.id, bits="".join(bits),
                       scores=tuple(scores), composite=composite)


@dataclass(frozen=True)
class ContingencyTree:
    """Total map from n-bit rule states to triage classes."""

    depth: int
    leaf_labels: Mapping[str, TriageClass]

    def __post_init__(self):
        expected = 2 ** self.depth
        if len(self.leaf_labels) != expected:
            raise ConfigurationError(
                f"leaf table must cover all {expected} states, has {len(self.leaf_labels)}")
        for state in self.leaf_labels:
            if len(state) != self.depth or any(b not in "01" for b in state):
                raise ConfigurationError(f"bad leaf state {state!r}")

    @classmethod
    def default(cls, ruleset: Ruleset | None = None,
                min_passing: int = 4) -> "ContingencyTree":
        """Default leaf table: a failed plagiarism or graphical/analytical bit
        marks fraud; otherwise fewer than ``min_passing`` passing bits marks
        below-threshold quality; everything else is acceptable-needs-work.
        """
        rs = ruleset or Ruleset.default()
        depth = len(rs)
        fraud_positions = [i for i, r in enumerate(rs.rules)
                           if r.category in (RuleCategory.PLAGIARISM,
                                             RuleCategory.GRAPHICAL_ANALYTICAL)]
        labels: dict[str, TriageClass] = {}
        for combo in product("01", repeat=depth):
            state = "".join(combo)
            if any(state[i] == "0" for i in fraud_positions):
                labels[state] = TriageClass.FRAUDULENT
            elif state.count("1") < min_passing:
                labels[state] = TriageClass.BELOW_THRESHOLD
            else:
                labels[state] = TriageClass.ACCEPTABLE_NEEDS_WORK
        return cls(depth=depth, leaf_labels=labels)

    def to_dict(self) -> dict:
        return {"depth": self.depth,
                "leaf_labels": {s: t.value for s, t in sorted(self.leaf_labels.items())}}

    @classmethod
    def from_dict(cls, d: dict) -> "ContingencyTree":
        return cls(depth=d["depth"],
                   leaf_labels={s: TriageClass(t) for s, t in d["leaf_labels"].items()})


def tree_classify(o: RuleOutcome, t: ContingencyTree) -> TriageClass:
    if len(o.bits) != t.depth:
        raise ValidationError(
            f"outcome has {len(o.bits)} bits but tree depth is {t.depth}")
    return t.leaf_labels[o.bits]


@dataclass(frozen=True)
class DiscriminantModel:
    """Linear projection with ordered cuts: fraud < t_fraud <= below < t_accept."""

    weights: tuple[float, ...]
    offset: float
    t_fraud: float
    t_accept: float

    def __post_init__(self):
        if not self.t_fraud < self.t_accept:
            raise ConfigurationError(
                f"cut points must satisfy t_fraud < t_accept, got "
                f"{self.t_fraud} >= {self.t_accept}")

    def project(self, scores: Sequence[float]) -> float:
        if len(scores) != len(self.weights):
            raise ValidationError(
                f"score vector of length {len(scores)} does not match "
                f"{len(self.weights)} weights")
        return math.fsum(w * s for w, s in zip(self.weights, scores)) + self.offset

    def to_dict(self) -> dict:
        return {"weights": list(self.weights), "offset": self.offset,
                "t_fraud": self.t_fraud, "t_accept": self.t_accept}

    @classmethod
    def from_dict(cls, d: dict) -> "DiscriminantModel":
        return cls(weights=tuple(d["weights"]), offset=d.get("offset", 0.0),
                   t_fraud=d["t_fraud"], t_accept=d["t_accept"])


def _mean_vector(rows: list[tuple[float, ...]]) -> tuple[float, ...]:
    n = len(rows)
    return tuple(math.fsum(r[j] for r in rows) / n for j in range(len(rows[0])))


def fit_discriminant(labeled: Iterable[tuple[RuleOutcome, TriageClass]]
                     ) -> DiscriminantModel:
    """Nearest-class-mean linear discriminant on rule score vectors.

    The projection direction is the normalized difference between the
    non-fraudulent and fraudulent class means; cut points sit midway between
    adjacent projected class means.
    """
    by_class: dict[TriageClass, list[tuple[float, ...]]] = {}
    for outcome, label in labeled:
        by_class.setdefault(label, []).append(outcome.scores)
    present = [c for c in TriageClass if c in by_class]
    if len(present) < 2:
        raise ValidationError("fit needs at least two triage classes present")
    for c in present:
        if len(by_class[c]) < 2:
            raise ValidationError(
                f"fit needs >= 2 samples per class; class {c.value!r} has "
                f"{len(by_class[c])}")
    if TriageClass.FRAUDULENT not in by_class:
        raise ValidationError("fit error: class 'fraudulent' is missing")

    fraud_mean = _mean_vector(by_class[TriageClass.FRAUDULENT])
    nonfraud_rows = [row for c in present if c is not TriageClass.FRAUDULENT
                     for row in by_class[c]]
    nonfraud_mean = _mean_vector(nonfraud_rows)
    direction = tuple(a - b for a, b in zip(nonfraud_mean, fraud_mean))
    norm = math.sqrt(math.fsum(d * d for d in direction))
    if norm < 1e-12:
        raise DegenerateFitError(
            "class mean score vectors coincide; no discriminant direction")
    weights = tuple(d / norm for d in direction)

    def proj(vec: tuple[float, ...]) -> float:
        return math.fsum(w * v for w, v in zip(weights, vec))

    class_proj = {c: proj(_mean_vector(by_class[c])) for c in present}
    if len(present) == 3:
        ordered = sorted(class_proj.values())
        t_fraud = 0.5 * (ordered[0] + ordered[1])
        t_accept = 0.5 * (ordered[1] + ordered[2])
    else:
        mid = 0.5 * sum(class_proj.values())
        eps = 1e-9 * max(1.0, abs(mid))
        t_fraud, t_accept = mid - eps, mid + eps
    if not t_fraud < t_accept:
        raise DegenerateFitError(
            "projected class means too close to order the cut points")
    return DiscriminantModel(weights=weights, offset=0.0,
                             t_fraud=t_fraud, t_accept=t_accept)


def discriminant_classify(o: RuleOutcome, d: DiscriminantModel) -> TriageClass:
    """Three-way triage by projection; boundary values go to the upper class."""
    p = d.project(o.scores)
    if p < d.t_fraud:
        return TriageClass.FRAUDULENT
    if p < d.t_accept:
        return TriageClass.BELOW_THRESHOLD
    return TriageClass.ACCEPTABLE_NEEDS_WORK
