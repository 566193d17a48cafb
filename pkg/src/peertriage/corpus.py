"""Manuscript data model and seed-reproducible synthetic corpora.

All randomness flows through a single numpy PCG64 generator per corpus, and
every draw happens in a fixed order, so a given ``CorpusConfig`` always
produces a byte-identical serialized corpus.  Feature values are truncated
Gaussians clamped to [0, 1]; clamping is counted so the tails can be audited.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from .errors import ConfigurationError, CorpusFormatError, ValidationError


class RuleCategory(str, Enum):
    """The six manuscript feature axes, in their fixed rule order."""

    METHODS = "methods"
    REASONING = "reasoning"
    PLAGIARISM = "plagiarism"
    REFERENCES_SELF_CITATION = "references_self_citation"
    CONVENTIONALITY = "conventionality"
    GRAPHICAL_ANALYTICAL = "graphical_analytical"


CATEGORIES: tuple[RuleCategory, ...] = tuple(RuleCategory)

NOVELTY_TIERS = ("low", "moderate", "high")


@dataclass(frozen=True)
class GroundTruth:
    fraud: bool
    quality: float
    novelty_level: float

    def __post_init__(self):
        for name in ("quality", "novelty_level"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValidationError(f"{name} must be in [0, 1], got {v!r}")

    def to_dict(self) -> dict:
        return {"fraud": self.fraud, "quality": self.quality,
                "novelty_level": self.novelty_level}


@dataclass(frozen=True)
class Manuscript:
    id: str
    features: Mapping[RuleCategory, float]
    truth: GroundTruth | None = None

    def __post_init__(self):
        if set(self.features) != set(CATEGORIES):
            missing = [c.value for c in CATEGORIES if c not in self.features]
            extra = [getattr(k, "value", k) for k in self.features if k not in CATEGORIES]
            raise ValidationError(
                f"manuscript {self.id!r} features must cover every category "
                f"exactly once (missing={missing}, extra={extra})")
        for cat, v in self.features.items():
            if not 0.0 <= v <= 1.0:
                raise ValidationError(
                    f"manuscript {self.id!r} feature {cat.value} out of [0, 1]: {v!r}")

    def to_record(self) -> dict:
        rec = {"id": self.id,
               "features": {c.value: self.features[c] for c in CATEGORIES}}
        if self.truth is not None:
            rec["truth"] = self.truth.to_dict()
        return rec


Corpus = list[Manuscript]


@dataclass(frozen=True)
class GaussianSpec:
    """Mean/spread of one truncated-Gaussian conditional."""

    mean: float
    sd: float

    def __post_init__(self):
        if not (math.isfinite(self.mean) and math.isfinite(self.sd)) or self.sd < 0:
            raise ConfigurationError(f"invalid Gaussian spec ({self.mean}, {self.sd})")

    def to_dict(self) -> dict:
        return {"mean": self.mean, "sd": self.sd}

    @classmethod
    def from_dict(cls, d) -> "GaussianSpec":
        return cls(mean=d["mean"], sd=d["sd"])


def _default_base() -> dict[RuleCategory, GaussianSpec]:
    return {c: GaussianSpec(0.75, 0.10) for c in CATEGORIES}


def _default_fraud_overrides() -> dict[RuleCategory, GaussianSpec]:
    return {RuleCategory.PLAGIARISM: GaussianSpec(0.35, 0.10),
            RuleCategory.GRAPHICAL_ANALYTICAL: GaussianSpec(0.35, 0.10)}


@dataclass(frozen=True)
class FeatureModel:
    """Per-category conditionals for feature, quality, and novelty draws.

    Fraudulent manuscripts pull their plagiarism and graphical/analytical
    features from the "bad" overrides; legitimate high-novelty manuscripts
    pull conventionality low while keeping plagiarism nominal, which is what
    keeps novelty statistically separable from fraud.
    """

    base: dict[RuleCategory, GaussianSpec] = field(default_factory=_default_base)
    fraud_overrides: dict[RuleCategory, GaussianSpec] = field(
        default_factory=_default_fraud_overrides)
    conventionality_by_tier: dict[str, GaussianSpec] = field(default_factory=lambda: {
        "moderate": GaussianSpec(0.55, 0.10),
        "high": GaussianSpec(0.30, 0.10)})
    quality_legit: GaussianSpec = GaussianSpec(0.72, 0.15)
    quality_fraud: GaussianSpec = GaussianSpec(0.30, 0.15)
    novelty_by_tier: dict[str, GaussianSpec] = field(default_factory=lambda: {
        "low": GaussianSpec(0.20, 0.10),
        "moderate": GaussianSpec(0.50, 0.10),
        "high": GaussianSpec(0.85, 0.10)})
    novelty_fraud: GaussianSpec = GaussianSpec(0.30, 0.15)

    def to_dict(self) -> dict:
        return {
            "base": {c.value: s.to_dict() for c, s in self.base.items()},
            "fraud_overrides": {c.value: s.to_dict()
                                for c, s in self.fraud_overrides.items()},
            "conventionality_by_tier": {t: s.to_dict()
                                        for t, s in self.conventionality_by_tier.items()},
            "quality_legit": self.quality_legit.to_dict(),
            "quality_fraud": self.quality_fraud.to_dict(),
            "novelty_by_tier": {t: s.to_dict() for t, s in self.novelty_by_tier.items()},
            "novelty_fraud": self.novelty_fraud.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureModel":
        kwargs = {}
        if "base" in d:
            kwargs["base"] = {RuleCategory(k): GaussianSpec.from_dict(v)
                              for k, v in d["base"].items()}
        if "fraud_overrides" in d:
            kwargs["fraud_overrides"] = {RuleCategory(k): GaussianSpec.from_dict(v)
                                         for k, v in d["fraud_overrides"].items()}
        if "conventionality_by_tier" in d:
            kwargs["conventionality_by_tier"] = {
                t: GaussianSpec.from_dict(v)
                for t, v in d["conventionality_by_tier"].items()}
        for key in ("quality_legit", "quality_fraud", "novelty_fraud"):
            if key in d:
                kwargs[key] = GaussianSpec.from_dict(d[key])
        if "novelty_by_tier" in d:
            kwargs["novelty_by_tier"] = {t: GaussianSpec.from_dict(v)
                                         for t, v in d["novelty_by_tier"].items()}
        return cls(**kwargs)


@dataclass(frozen=True)
class CorpusConfig:
    n: int
    fraud_rate: float = 0.10
    novelty_mix: dict[str, float] = field(default_factory=lambda: {
        "low": 0.70, "moderate": 0.20, "high": 0.10})
    feature_model: FeatureModel = field(default_factory=FeatureModel)
    seed: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ConfigurationError(f"n must be >= 0, got {self.n}")
        if not 0.0 <= self.fraud_rate <= 1.0:
            raise ConfigurationError(f"fraud_rate must be in [0, 1], got {self.fraud_rate}")
        if set(self.novelty_mix) != set(NOVELTY_TIERS):
            raise ConfigurationError(
                f"novelty_mix must have exactly the keys {NOVELTY_TIERS}")
        total = sum(self.novelty_mix.values())
        if abs(total - 1.0) > 1e-12:
            raise ConfigurationError(f"novelty_mix proportions sum to {total}, not 1")
        if any(v < 0 for v in self.novelty_mix.values()):
            raise ConfigurationError("novelty_mix proportions must be nonnegative")
        if self.seed < 0:
            raise ConfigurationError("seed must be a nonnegative integer")

    def to_dict(self) -> dict:
        return {"n": self.n, "fraud_rate": self.fraud_rate,
                "novelty_mix": dict(self.novelty_mix),
                "feature_model": self.feature_model.to_dict(), "seed": self.seed}

    @classmethod
    def from_dict(cls, d: dict) -> "CorpusConfig":
        kwargs = dict(d)
        if "feature_model" in kwargs:
            kwargs["feature_model"] = FeatureModel.from_dict(kwargs["feature_model"])
        return cls(**kwargs)


@dataclass
class ClampAudit:
    """Counts feature draws that fell outside [0, 1] and were clamped."""

    clamped: int = 0
    total: int = 0

    @property
    def fraction(self) -> float:
        return self.clamped / self.total if self.total else 0.0


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _tier_counts(n_legit: int, mix: Mapping[str, float]) -> dict[str, int]:
    # largest-remainder apportionment, ties broken by tier order
    raw = {t: n_legit * mix[t] for t in NOVELTY_TIERS}
    counts = {t: int(math.floor(raw[t])) for t in NOVELTY_TIERS}
    remainder = n_legit - sum(counts.values())
    order = sorted(NOVELTY_TIERS,
                   key=lambda t: (-(raw[t] - counts[t]), NOVELTY_TIERS.index(t)))
    for t in order[:remainder]:
        counts[t] += 1
    return counts


def _draw(rng: np.random.Generator, spec: GaussianSpec, size: int,
          audit: ClampAudit | None) -> np.ndarray:
    values = rng.normal(spec.mean, spec.sd, size) if spec.sd > 0 \
        else np.full(size, spec.mean)
    if audit is not None:
        audit.total += size
        audit.clamped += int(np.count_nonzero((values < 0.0) | (values > 1.0)))
    return np.clip(values, 0.0, 1.0)


def generate_corpus_audited(config: CorpusConfig) -> tuple[Corpus, ClampAudit]:
    """Generate a corpus and report the feature clamp audit."""
    audit = ClampAudit()
    if config.n == 0:
        return [], audit
    rng = np.random.Generator(np.random.PCG64(config.seed))
    fm = config.feature_model
    n_fraud = _round_half_up(config.n * config.fraud_rate)
    n_legit = config.n - n_fraud
    tier_counts = _tier_counts(n_legit, config.novelty_mix)

    groups: list[tuple[int, bool, str]] = [(n_fraud, True, "fraud")]
    groups += [(tier_counts[t], False, t) for t in NOVELTY_TIERS]

    fraud_flags: list[np.ndarray] = []
    qualities: list[np.ndarray] = []
    novelties: list[np.ndarray] = []
    features: list[np.ndarray] = []
    for size, is_fraud, tier in groups:
        if size == 0:
            continue
        q_spec = fm.quality_fraud if is_fraud else fm.quality_legit
        nv_spec = fm.novelty_fraud if is_fraud else fm.novelty_by_tier[tier]
        qualities.append(_draw(rng, q_spec, size, None))
        novelties.append(_draw(rng, nv_spec, size, None))
        cols = []
        for cat in CATEGORIES:
            spec = fm.base[cat]
            if is_fraud and cat in fm.fraud_overrides:
                spec = fm.fraud_overrides[cat]
            elif (not is_fraud and cat is RuleCategory.CONVENTIONALITY
                  and tier in fm.conventionality_by_tier):
                spec = fm.conventionality_by_tier[tier]
            cols.append(_draw(rng, spec, size, audit))
        features.append(np.column_stack(cols))
        fraud_flags.append(np.full(size, is_fraud, dtype=bool))

    fraud_arr = np.concatenate(fraud_flags)
    quality_arr = np.concatenate(qualities)
    novelty_arr = np.concatenate(novelties)
    feature_arr = np.vstack(features)
    order = rng.permutation(config.n)

    width = max(6, len(str(config.n)))
    corpus: Corpus = []
    for new_idx, src in enumerate(order):
        feats = {cat: float(feature_arr[src, j]) for j, cat in enumerate(CATEGORIES)}
        truth = GroundTruth(fraud=bool(fraud_arr[src]),
                            quality=float(quality_arr[src]),
                            novelty_level=float(novelty_arr[src]))
        corpus.append(Manuscript(id=f"m{new_idx:0{width}d}", features=feats,
                                 truth=truth))
    return corpus, audit


def generate_corpus(config: CorpusConfig) -> Corpus:
    """Generate a synthetic corpus; see :func:`generate_corpus_audited`."""
    corpus, _ = generate_corpus_audited(config)
    return corpus


_TRUTH_FIELDS = {"fraud", "quality", "novelty_level"}


def manuscript_from_record(rec: dict, line: int | None = None) -> Manuscript:
    if not isinstance(rec, dict):
        raise CorpusFormatError("record is not a JSON object", line)
    unknown = set(rec) - {"id", "features", "truth"}
    if unknown:
        raise CorpusFormatError(f"unknown fields {sorted(unknown)}", line)
    if "id" not in rec or "features" not in rec:
        raise CorpusFormatError("record needs 'id' and 'features'", line)
    try:
        feats = {RuleCategory(k): float(v) for k, v in rec["features"].items()}
    except ValueError as exc:
        raise CorpusFormatError(f"bad feature entry: {exc}", line) from exc
    truth = None
    if "truth" in rec:
        t = rec["truth"]
        unknown_t = set(t) - _TRUTH_FIELDS
        if unknown_t:
            raise CorpusFormatError(f"unknown truth fields {sorted(unknown_t)}", line)
        if set(t) != _TRUTH_FIELDS:
            raise CorpusFormatError(
                f"truth needs exactly the fields {sorted(_TRUTH_FIELDS)}", line)
        truth = GroundTruth(fraud=bool(t["fraud"]), quality=float(t["quality"]),
                            novelty_level=float(t["novelty_level"]))
    try:
        return Manuscript(id=str(rec["id"]), features=feats, truth=truth)
    except ValidationError as exc:
        raise CorpusFormatError(str(exc), line) from exc


def save_corpus(corpus: Iterable[Manuscript], path) -> None:
    """Write a corpus as UTF-8 JSONL, one manuscript per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for m in corpus:
            fh.write(json.dumps(m.to_record()) + "\n")


def load_corpus(path) -> Corpus:
    corpus: Corpus = []
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                rec = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"invalid JSON: {exc.msg}", lineno) from exc
            m = manuscript_from_record(rec, lineno)
            if m.id in seen:
                raise CorpusFormatError(f"duplicate id {m.id!r}", lineno)
            seen.add(m.id)
            corpus.append(m)
    return corpus


@dataclass(frozen=True)
class CorpusStats:
    """Empirical state frequencies and per-category score histograms."""

    n: int
    state_frequencies: dict[str, float]
    histograms: dict[RuleCategory, tuple[float, ...]]
    bins: int


def corpus_stats(corpus: Corpus,
                 thresholds: Mapping[RuleCategory, float] | None = None,
                 bins: int = 8) -> CorpusStats:
    """Frequencies of binary rule-state strings plus score histograms.

    States are derived by thresholding each feature (default 0.5, pass-if->=)
    in category order; histograms use ``bins`` equal-width bins on [0, 1].
    """
    if not corpus:
        raise ValidationError("corpus_stats requires a nonempty corpus")
    if bins < 1:
        raise ConfigurationError("bins must be >= 1")
    thr = {c: 0.5 for c in CATEGORIES}
    if thresholds:
        thr.update(thresholds)
    counts: dict[str, int] = {}
    hist_counts = {c: [0] * bins for c in CATEGORIES}
    for m in corpus:
        state = "".join("1" if m.features[c] >= thr[c] else "0" for c in CATEGORIES)
        counts[state] = counts.get(state, 0) + 1
        for c in CATEGORIES:
            idx = min(int(m.features[c] * bins), bins - 1)
            hist_counts[c][idx] += 1
    n = len(corpus)
    freqs = {s: counts[s] / n for s in sorted(counts)}
    hists = {c: tuple(v / n for v in hist_counts[c]) for c in CATEGORIES}
    return CorpusStats(n=n, state_frequencies=freqs, histograms=hists, bins=bins)
