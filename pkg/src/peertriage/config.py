"""Single JSON config document covering every pipeline component.

Sections: corpus, ruleset, classifier, novelty, adapt, oracle, panel,
service, simulation.  Any section may be omitted; defaults fill the gaps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .adapt import AdaptPolicy
from .corpus import CorpusConfig
from .errors import ConfigurationError
from .rules import ContingencyTree, DiscriminantModel, Ruleset

CLASSIFIER_MODES = ("tree", "discriminant", "truth")
REVIEW_MODES = ("all", "flagged")


@dataclass(frozen=True)
class ClassifierConfig:
    """Which triage route to use and its parameters.

    In discriminant mode the accept cut is steered by the adaptive criterion;
    the static ``model`` cuts apply before any fraud-score estimate exists.
    "truth" mode copies ground truth and exists for diagnostics only.
    """

    mode: str = "discriminant"
    adaptive: bool = True
    tree: ContingencyTree | None = None
    model: DiscriminantModel | None = None

    def __post_init__(self):
        if self.mode not in CLASSIFIER_MODES:
            raise ConfigurationError(
                f"classifier mode must be one of {CLASSIFIER_MODES}, got {self.mode!r}")

    def to_dict(self) -> dict:
        out: dict = {"mode": self.mode, "adaptive": self.adaptive}
        if self.tree is not None:
            out["tree"] = self.tree.to_dict()
        if self.model is not None:
            out["model"] = self.model.to_dict()
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "ClassifierConfig":
        return cls(mode=d.get("mode", "discriminant"),
                   adaptive=d.get("adaptive", True),
                   tree=ContingencyTree.from_dict(d["tree"]) if "tree" in d else None,
                   model=DiscriminantModel.from_dict(d["model"]) if "model" in d else None)


@dataclass(frozen=True)
class NoveltyConfig:
    t_moderate: float = 0.3
    t_high: float = 1.0
    bins: int = 8
    mode: str = "bits"

    def __post_init__(self):
        if not 0.0 <= self.t_moderate < self.t_high:
            raise ConfigurationError(
                f"need 0 <= t_moderate < t_high, got ({self.t_moderate}, {self.t_high})")
        if self.bins < 1:
            raise ConfigurationError("bins must be >= 1")
        if self.mode not in ("bits", "bins"):
            raise ConfigurationError(f"novelty mode must be 'bits' or 'bins', got {self.mode!r}")

    @property
    def thresholds(self) -> tuple[float, float]:
        return (self.t_moderate, self.t_high)

    def to_dict(self) -> dict:
        return {"t_moderate": self.t_moderate, "t_high": self.t_high,
                "bins": self.bins, "mode": self.mode}

    @classmethod
    def from_dict(cls, d: dict) -> "NoveltyConfig":
        return cls(**d)


@dataclass(frozen=True)
class OracleConfig:
    """Simulated expert: reports ground truth with per-class accuracy."""

    accuracy_legitimate: float = 1.0
    accuracy_fraudulent: float = 1.0
    accuracy_below_threshold: float = 1.0
    quality_cut: float = 0.4

    def __post_init__(self):
        for name in ("accuracy_legitimate", "accuracy_fraudulent",
                     "accuracy_below_threshold", "quality_cut"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigurationError(f"{name} must be in [0, 1], got {v!r}")

    def to_dict(self) -> dict:
        return {"accuracy_legitimate": self.accuracy_legitimate,
                "accuracy_fraudulent": self.accuracy_fraudulent,
                "accuracy_below_threshold": self.accuracy_below_threshold,
                "quality_cut": self.quality_cut}

    @classmethod
    def from_dict(cls, d: dict) -> "OracleConfig":
        return cls(**d)


@dataclass(frozen=True)
class PanelConfig:
    """Traditional peer-review baseline: k noisy reviewers plus an editor rule."""

    k: int = 2
    reviewer_dprime_mean: float = 1.5
    reviewer_dprime_spread: float = 0.3
    reviewer_bias_spread: float = 0.3
    criterion_mean: float = 0.9
    novelty_aversion: float = 0.5
    editor_rule: str = "majority"

    def __post_init__(self):
        if self.k < 1:
            raise ConfigurationError(f"panel needs k >= 1 reviewers, got {self.k}")
        if self.novelty_aversion < 0:
            raise ConfigurationError("novelty_aversion must be >= 0")
        if self.reviewer_dprime_spread < 0 or self.reviewer_bias_spread < 0:
            raise ConfigurationError("spreads must be >= 0")
        if self.editor_rule not in ("majority", "unanimous"):
            raise ConfigurationError(
                f"editor_rule must be 'majority' or 'unanimous', got {self.editor_rule!r}")

    def to_dict(self) -> dict:
        return {"k": self.k,
                "reviewer_dprime_mean": self.reviewer_dprime_mean,
                "reviewer_dprime_spread": self.reviewer_dprime_spread,
                "reviewer_bias_spread": self.reviewer_bias_spread,
                "criterion_mean": self.criterion_mean,
                "novelty_aversion": self.novelty_aversion,
                "editor_rule": self.editor_rule}

    @classmethod
    def from_dict(cls, d: dict) -> "PanelConfig":
        return cls(**d)


@dataclass(frozen=True)
class ServiceConfig:
    corpus_path: str | None = None
    state_dir: str = "peertriage-state"
    batch_size: int = 50
    review_mode: str = "all"

    def __post_init__(self):
        if self.batch_size < 1:
            raise ConfigurationError("batch_size must be >= 1")
        if self.review_mode not in REVIEW_MODES:
            raise ConfigurationError(
                f"review_mode must be one of {REVIEW_MODES}, got {self.review_mode!r}")

    def to_dict(self) -> dict:
        return {"corpus_path": self.corpus_path, "state_dir": self.state_dir,
                "batch_size": self.batch_size, "review_mode": self.review_mode}

    @classmethod
    def from_dict(cls, d: dict) -> "ServiceConfig":
        return cls(**d)


@dataclass(frozen=True)
class SimulationConfig:
    rounds: int = 10
    n_per_round: int = 10_000
    master_seed: int = 42
    review_mode: str = "all"
    initial_x_c: float = 0.0
    convergence_window: int = 5
    convergence_tol: float = 0.05

    def __post_init__(self):
        if self.rounds < 0:
            raise ConfigurationError("rounds must be >= 0")
        if self.n_per_round < 1:
            raise ConfigurationError("n_per_round must be >= 1")
        if self.review_mode not in REVIEW_MODES:
            raise ConfigurationError(
                f"review_mode must be one of {REVIEW_MODES}, got {self.review_mode!r}")

    def to_dict(self) -> dict:
        return {"rounds": self.rounds, "n_per_round": self.n_per_round,
                "master_seed": self.master_seed, "review_mode": self.review_mode,
                "initial_x_c": self.initial_x_c,
                "convergence_window": self.convergence_window,
                "convergence_tol": self.convergence_tol}

    @classmethod
    def from_dict(cls, d: dict) -> "SimulationConfig":
        return cls(**d)


@dataclass(frozen=True)
class PipelineConfig:
    """The full config document."""

    corpus: CorpusConfig = field(default_factory=lambda: CorpusConfig(n=10_000))
    ruleset: Ruleset = field(default_factory=Ruleset.default)
    classifier: ClassifierConfig = field(default_factory=ClassifierConfig)
    novelty: NoveltyConfig = field(default_factory=NoveltyConfig)
    adapt: AdaptPolicy = field(default_factory=AdaptPolicy)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    panel: PanelConfig = field(default_factory=PanelConfig)
    service: ServiceConfig = field(default_factory=ServiceConfig)
    simulation: SimulationConfig = field(default_factory=SimulationConfig)

    def to_dict(self) -> dict:
        return {"corpus": self.corpus.to_dict(),
                "ruleset": self.ruleset.to_dict(),
                "classifier": self.classifier.to_dict(),
                "novelty": self.novelty.to_dict(),
                "adapt": self.adapt.to_dict(),
                "oracle": self.oracle.to_dict(),
                "panel": self.panel.to_dict(),
                "service": self.service.to_dict(),
                "simulation": self.simulation.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        known = {"corpus", "ruleset", "classifier", "novelty", "adapt",
                 "oracle", "panel", "service", "simulation"}
        unknown = set(d) - known
        if unknown:
            raise ConfigurationError(f"unknown config sections {sorted(unknown)}")
        kwargs = {}
        if "corpus" in d:
            kwargs["corpus"] = CorpusConfig.from_dict(d["corpus"])
        if "ruleset" in d:
            kwargs["ruleset"] = Ruleset.from_dict(d["ruleset"])
        if "classifier" in d:
            kwargs["classifier"] = ClassifierConfig.from_dict(d["classifier"])
        if "novelty" in d:
            kwargs["novelty"] = NoveltyConfig.from_dict(d["novelty"])
        if "adapt" in d:
            kwargs["adapt"] = AdaptPolicy.from_dict(d["adapt"])
        if "oracle" in d:
            kwargs["oracle"] = OracleConfig.from_dict(d["oracle"])
        if "panel" in d:
            kwargs["panel"] = PanelConfig.from_dict(d["panel"])
        if "service" in d:
            kwargs["service"] = ServiceConfig.from_dict(d["service"])
        if "simulation" in d:
            kwargs["simulation"] = SimulationConfig.from_dict(d["simulation"])
        return cls(**kwargs)


def load_config(path) -> PipelineConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config {path}: invalid JSON: {exc}") from exc
    return PipelineConfig.from_dict(doc)


def save_config(config: PipelineConfig, path) -> None:
    Path(path).write_text(json.dumps(config.to_dict(), indent=2) + "\n",
                          encoding="utf-8")
