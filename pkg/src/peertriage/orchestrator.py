"""End-to-end evaluation rounds and the simulation driver.

One round: classify every manuscript, attach novelty flags, route flagged
(or, by default, all) decisions to human review, build the confusion table
from the machine actions against the human-established labels, derive SDT
metrics, and advance the adaptive criterion for the next round.

The whole run is deterministic per master seed: per-round corpus, oracle,
and panel seeds are drawn once from a master generator, and simulated
verdict timestamps are logical sequence numbers.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Mapping, Sequence

import numpy as np

from .adapt import CalibrationState, has_converged, update_criterion
from .config import OracleConfig, PipelineConfig
from .corpus import Manuscript, generate_corpus
from .errors import ValidationError
from .novelty import FlagLevel, NoveltyFlag, ProbTable, flag_novelty, manuscript_novelty
from .panel import simulate_traditional_panel
from .roc import auc, downsample_curve, empirical_roc
from .rules import (ContingencyTree, DiscriminantModel, TriageClass,
                    discriminant_classify, evaluate_rules, tree_classify)
from .sdt import ConfusionTable, SdtMetrics

# static composite-axis cuts used before any fraud-score estimate exists;
# calibrated to the default feature model, overridable via classifier.model
DEFAULT_T_FRAUD = 0.55
DEFAULT_T_ACCEPT = 0.70
# verdict-labeled fraud composites needed before the adaptive cut engages
MIN_FRAUD_SAMPLES = 30


class Action(str, Enum):
    ACCEPT = "accept"
    REJECT = "reject"


class VerdictClass(str, Enum):
    LEGITIMATE = "legitimate"
    FRAUDULENT = "fraudulent"
    BELOW_THRESHOLD = "below_threshold"


TRIAGE_TO_ACTION = {
    TriageClass.FRAUDULENT: Action.REJECT,
    TriageClass.BELOW_THRESHOLD: Action.REJECT,
    TriageClass.ACCEPTABLE_NEEDS_WORK: Action.ACCEPT,
}


@dataclass(frozen=True)
class Decision:
    manuscript_id: str
    triage: TriageClass
    action: Action
    novelty_flag: NoveltyFlag
    needs_human: bool
    composite: float
    bits: str

    def to_record(self) -> dict:
        return {"manuscript_id": self.manuscript_id, "triage": self.triage.value,
                "action": self.action.value,
                "novelty_flag": self.novelty_flag.to_dict(),
                "needs_human": self.needs_human,
                "composite": self.composite, "bits": self.bits}

    @classmethod
    def from_record(cls, d: dict) -> "Decision":
        return cls(manuscript_id=d["manuscript_id"],
                   triage=TriageClass(d["triage"]), action=Action(d["action"]),
                   novelty_flag=NoveltyFlag(level=FlagLevel(d["novelty_flag"]["level"]),
                                            bits=d["novelty_flag"]["bits"]),
                   needs_human=d["needs_human"], composite=d["composite"],
                   bits=d["bits"])


@dataclass(frozen=True)
class HumanVerdict:
    manuscript_id: str
    verdict: VerdictClass
    reviewer_id: str
    timestamp: str

    def to_record(self) -> dict:
        return {"manuscript_id": self.manuscript_id, "verdict": self.verdict.value,
                "reviewer_id": self.reviewer_id, "timestamp": self.timestamp}

    @classmethod
    def from_record(cls, d: dict) -> "HumanVerdict":
        return cls(manuscript_id=d["manuscript_id"],
                   verdict=VerdictClass(d["verdict"]),
                   reviewer_id=d["reviewer_id"], timestamp=d["timestamp"])


@dataclass(frozen=True)
class RoundLog:
    round: int
    decisions: tuple[Decision, ...]
    verdicts: tuple[HumanVerdict, ...]
    confusion: ConfusionTable
    metrics: SdtMetrics | None
    calibration: dict
    config_fingerprint: str
    batch_fingerprint: str

    def to_record(self) -> dict:
        return {"round": self.round,
                "decisions": [d.to_record() for d in self.decisions],
                "verdicts": [v.to_record() for v in self.verdicts],
                "confusion": self.confusion.to_dict(),
                "metrics": self.metrics.to_dict() if self.metrics else None,
                "calibration": self.calibration,
                "config_fingerprint": self.config_fingerprint,
                "batch_fingerprint": self.batch_fingerprint}


def fingerprint(payload) -> str:
    blob = json.dumps(payload, sort_keys=True).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()


def batch_fingerprint(batch: Sequence[Manuscript]) -> str:
    return fingerprint([m.to_record() for m in batch])


def truth_class(m: Manuscript, quality_cut: float) -> VerdictClass:
    if m.truth is None:
        raise ValidationError(f"manuscript {m.id!r} has no ground truth")
    if m.truth.fraud:
        return VerdictClass.FRAUDULENT
    if m.truth.quality < quality_cut:
        return VerdictClass.BELOW_THRESHOLD
    return VerdictClass.LEGITIMATE


class SimulatedOracle:
    """Expert stand-in: reports the true class with per-class accuracy."""

    def __init__(self, config: OracleConfig, seed: int = 0,
                 reviewer_id: str = "oracle"):
        self.config = config
        self.reviewer_id = reviewer_id
        self._rng = np.random.Generator(np.random.PCG64(seed))
        self._counter = 0

    def verdict(self, m: Manuscript) -> HumanVerdict:
        true = truth_class(m, self.config.quality_cut)
        accuracy = {
            VerdictClass.LEGITIMATE: self.config.accuracy_legitimate,
            VerdictClass.FRAUDULENT: self.config.accuracy_fraudulent,
            VerdictClass.BELOW_THRESHOLD: self.config.accuracy_below_threshold,
        }[true]
        reported = true
        if accuracy < 1.0 and self._rng.random() >= accuracy:
            others = [v for v in VerdictClass if v is not true]
            reported = others[int(self._rng.integers(len(others)))]
        ts = str(self._counter)
        self._counter += 1
        return HumanVerdict(manuscript_id=m.id, verdict=reported,
                            reviewer_id=self.reviewer_id, timestamp=ts)


def compute_confusion(decisions: Sequence[Decision],
                      labels: Mapping[str, VerdictClass]) -> ConfusionTable:
    """Machine actions against labels, in Table-1 orientation (counts).

    The cells name only the legitimate and fraud classes, so manuscripts
    labeled below-threshold sit outside the binary table: a quality-based
    rejection is neither a missed legitimate paper nor a caught fraud.
    """
    tp = fn = fp = tn = 0
    for d in decisions:
        label = labels[d.manuscript_id]
        if label is VerdictClass.BELOW_THRESHOLD:
            continue
        accepted = d.action is Action.ACCEPT
        if label is VerdictClass.FRAUDULENT:
            if accepted:
                fp += 1
            else:
                tn += 1
        else:
            if accepted:
                tp += 1
            else:
                fn += 1
    return ConfusionTable(tp=tp, fn=fn, fp=fp, tn=tn)


def final_action(decision: Decision, verdict: HumanVerdict | None) -> Action:
    """Published outcome: the human verdict overrides a reviewed decision."""
    if verdict is None:
        return decision.action
    if verdict.verdict is VerdictClass.LEGITIMATE:
        return Action.ACCEPT
    return Action.REJECT


@dataclass
class FraudScoreStats:
    """Running mean/variance (Welford) of verdict-labeled fraud composites."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    def update(self, value: float) -> None:
        self.count += 1
        delta = value - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (value - self.mean)

    @property
    def sd(self) -> float:
        if self.count < 2:
            return 0.0
        return math.sqrt(self.m2 / (self.count - 1))

    @property
    def ready(self) -> bool:
        return self.count >= MIN_FRAUD_SAMPLES and self.sd > 0.0


class RoundRunner:
    """Owns the per-run state: calibration, fraud-score estimate, oracle."""

    def __init__(self, config: PipelineConfig,
                 calibration: CalibrationState | None = None,
                 review_mode: str | None = None):
        self.config = config
        self.ruleset = config.ruleset
        self.review_mode = review_mode or config.service.review_mode
        self.calibration = calibration or CalibrationState(
            x_c=config.simulation.initial_x_c)
        self.fraud_stats = FraudScoreStats()
        self.config_fingerprint = fingerprint(config.to_dict())
        self._tree = config.classifier.tree or ContingencyTree.default(self.ruleset)
        self._model = config.classifier.model or DiscriminantModel(
            weights=self.ruleset.weights, offset=0.0,
            t_fraud=DEFAULT_T_FRAUD, t_accept=DEFAULT_T_ACCEPT)

    def accept_cut(self) -> float:
        """Accept threshold on the composite axis for the current round."""
        model = self._model
        if (self.config.classifier.adaptive and self.fraud_stats.ready
                and self.config.classifier.mode == "discriminant"):
            cut = self.fraud_stats.mean + self.calibration.x_c * self.fraud_stats.sd
            return max(cut, model.t_fraud + 1e-9)
        return model.t_accept

    def classify(self, batch: Sequence[Manuscript]) -> list[Decision]:
        """Triage, novelty-flag, and route every manuscript in the batch."""
        if not batch:
            raise ValidationError("classification needs a nonempty batch")
        outcomes = [evaluate_rules(m, self.ruleset) for m in batch]
        ncfg = self.config.novelty
        if ncfg.mode == "bins":
            pt = ProbTable.from_scores(outcomes, bins=ncfg.bins)
        else:
            pt = ProbTable.from_outcomes(outcomes)

        mode = self.config.classifier.mode
        cut = self.accept_cut()
        model = self._model if cut == self._model.t_accept \
            else replace(self._model, t_accept=cut)
        decisions: list[Decision] = []
        seen: set[str] = set()
        for m, outcome in zip(batch, outcomes):
            if m.id in seen:
                raise ValidationError(f"duplicate manuscript id {m.id!r} in batch")
            seen.add(m.id)
            if mode == "tree":
                triage = tree_classify(outcome, self._tree)
            elif mode == "truth":
                triage = {
                    VerdictClass.FRAUDULENT: TriageClass.FRAUDULENT,
                    VerdictClass.BELOW_THRESHOLD: TriageClass.BELOW_THRESHOLD,
                    VerdictClass.LEGITIMATE: TriageClass.ACCEPTABLE_NEEDS_WORK,
                }[truth_class(m, self.config.oracle.quality_cut)]
            else:
                triage = discriminant_classify(outcome, model)
            flag = flag_novelty(manuscript_novelty(outcome, pt).bits,
                                ncfg.thresholds)
            needs_human = (self.review_mode == "all"
                           or flag.level in (FlagLevel.MODERATE, FlagLevel.HIGH))
            decisions.append(Decision(
                manuscript_id=m.id, triage=triage,
                action=TRIAGE_TO_ACTION[triage], novelty_flag=flag,
                needs_human=needs_human, composite=outcome.composite,
                bits=outcome.bits))
        return decisions

    def finalize(self, batch: Sequence[Manuscript], decisions: Sequence[Decision],
                 verdicts: Sequence[HumanVerdict],
                 require_labels: bool = True) -> RoundLog:
        """Close a round: confusion, metrics, criterion update, state commit.

        Labels come from verdicts, falling back to ground truth; decisions
        with neither are excluded from the confusion when ``require_labels``
        is off (live mode) and rejected otherwise.
        """
        verdict_map = {v.manuscript_id: v for v in verdicts}
        by_id = {m.id: m for m in batch}
        labels: dict[str, VerdictClass] = {}
        labeled_decisions: list[Decision] = []
        for d in decisions:
            v = verdict_map.get(d.manuscript_id)
            if v is not None:
                labels[d.manuscript_id] = v.verdict
            elif by_id[d.manuscript_id].truth is not None:
                labels[d.manuscript_id] = truth_class(
                    by_id[d.manuscript_id], self.config.oracle.quality_cut)
            elif require_labels:
                raise ValidationError(
                    f"decision {d.manuscript_id!r} has neither verdict nor ground truth")
            else:
                continue
            labeled_decisions.append(d)

        confusion = compute_confusion(labeled_decisions, labels)
        metrics: SdtMetrics | None = None
        if confusion.tp + confusion.fn > 0 and confusion.fp + confusion.tn > 0:
            metrics = SdtMetrics.from_confusion(confusion)
            new_calibration = update_criterion(self.calibration, metrics,
                                               self.config.adapt)
        else:
            # metrics need both rows; the round still advances, criterion holds
            new_calibration = replace(self.calibration,
                                      round=self.calibration.round + 1)
        log = RoundLog(
            round=self.calibration.round,
            decisions=tuple(decisions), verdicts=tuple(verdicts),
            confusion=confusion, metrics=metrics,
            calibration={"x_c": self.calibration.x_c,
                         "next_x_c": new_calibration.x_c,
                         "accept_cut": self.accept_cut(),
                         "round": self.calibration.round},
            config_fingerprint=self.config_fingerprint,
            batch_fingerprint=batch_fingerprint(batch))

        # commit state only after the full round succeeded
        self.calibration = new_calibration
        for d in labeled_decisions:
            if labels[d.manuscript_id] is VerdictClass.FRAUDULENT:
                self.fraud_stats.update(d.composite)
        return log

    def run_round(self, batch: Sequence[Manuscript],
                  oracle: SimulatedOracle | None = None,
                  verdict_source: Callable[[Decision, Manuscript], HumanVerdict] | None = None
                  ) -> RoundLog:
        """Run one full loop traversal over a batch.

        The calibration state and fraud-score estimate are only committed
        after every step succeeds, so a failing oracle leaves the runner
        unchanged.
        """
        decisions = self.classify(batch)
        by_id = {m.id: m for m in batch}
        verdicts: list[HumanVerdict] = []
        for d in decisions:
            if not d.needs_human:
                continue
            if verdict_source is not None:
                verdicts.append(verdict_source(d, by_id[d.manuscript_id]))
            elif oracle is not None:
                verdicts.append(oracle.verdict(by_id[d.manuscript_id]))
            else:
                raise ValidationError(
                    "needs_human decisions require an oracle or verdict source")
        return self.finalize(batch, decisions, verdicts)


def run_round(batch: Sequence[Manuscript], config: PipelineConfig,
              calibration: CalibrationState,
              oracle: SimulatedOracle) -> tuple[RoundLog, CalibrationState]:
    """One-shot round: returns the log and the advanced calibration state."""
    runner = RoundRunner(config, calibration=calibration)
    log = runner.run_round(batch, oracle=oracle)
    return log, runner.calibration


@dataclass(frozen=True)
class SimulationReport:
    config: dict
    master_seed: int
    rounds: tuple[dict, ...]
    convergence: dict
    auc_semi: float | None
    auc_traditional: float | None
    separation: dict
    curves: dict = field(default_factory=dict)
    # full-resolution curves for CSV export; not part of the serialized report
    full_curves: dict = field(default_factory=dict, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {"config": self.config, "master_seed": self.master_seed,
                "rounds": list(self.rounds), "convergence": self.convergence,
                "auc_semi": self.auc_semi, "auc_traditional": self.auc_traditional,
                "separation": self.separation, "curves": self.curves}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


HIGH_NOVELTY_CUTOFF = 0.7


def _round_summary(log: RoundLog, n: int) -> dict:
    flags = {level.value: 0 for level in FlagLevel}
    accepts = 0
    for d in log.decisions:
        flags[d.novelty_flag.level.value] += 1
        if d.action is Action.ACCEPT:
            accepts += 1
    return {"round": log.round,
            "x_c": log.calibration["x_c"],
            "accept_cut": log.calibration["accept_cut"],
            "metrics": log.metrics.to_dict() if log.metrics else None,
            "confusion": log.confusion.to_dict(),
            "accept_rate": accepts / n,
            "novelty_flags": flags,
            "n": n}


def run_simulation(config: PipelineConfig,
                   keep_round_logs: bool = True) -> tuple[SimulationReport, list[RoundLog]]:
    """R rounds of the adaptive loop plus the panel baseline on the same corpora."""
    sim = config.simulation
    master = np.random.Generator(np.random.PCG64(sim.master_seed))
    if sim.rounds == 0:
        report = SimulationReport(
            config=config.to_dict(), master_seed=sim.master_seed, rounds=(),
            convergence={"converged": False, "first_round": None,
                         "window": sim.convergence_window, "tol": sim.convergence_tol},
            auc_semi=None, auc_traditional=None, separation={})
        return report, []

    runner = RoundRunner(config, review_mode=sim.review_mode)
    round_logs: list[RoundLog] = []
    summaries: list[dict] = []
    semi_scored: list[tuple[float, bool]] = []
    trad_scored: list[tuple[float, bool]] = []
    high_nov_semi = [0, 0]   # rejected, total
    high_nov_trad = [0, 0]
    first_converged: int | None = None

    for r in range(sim.rounds):
        corpus_seed = int(master.integers(2 ** 63))
        oracle_seed = int(master.integers(2 ** 63))
        panel_seed = int(master.integers(2 ** 63))
        batch = generate_corpus(replace(config.corpus, n=sim.n_per_round,
                                        seed=corpus_seed))
        oracle = SimulatedOracle(config.oracle, seed=oracle_seed)
        log = runner.run_round(batch, oracle=oracle)
        round_logs.append(log)
        summaries.append(_round_summary(log, len(batch)))
        if first_converged is None and has_converged(
                runner.calibration, sim.convergence_window, sim.convergence_tol):
            first_converged = log.round

        verdict_map = {v.manuscript_id: v for v in log.verdicts}
        by_id = {m.id: m for m in batch}
        nov_bits = {d.manuscript_id: d.novelty_flag.bits for d in log.decisions}
        panel_decisions, _ = simulate_traditional_panel(
            batch, config.panel, panel_seed, novelty_bits=nov_bits)

        for d in log.decisions:
            m = by_id[d.manuscript_id]
            semi_scored.append((d.composite, not m.truth.fraud))
            outcome = final_action(d, verdict_map.get(d.manuscript_id))
            if (not m.truth.fraud
                    and m.truth.novelty_level >= HIGH_NOVELTY_CUTOFF):
                high_nov_semi[1] += 1
                if outcome is Action.REJECT:
                    high_nov_semi[0] += 1
        for pd in panel_decisions:
            m = by_id[pd.manuscript_id]
            trad_scored.append((pd.vote_fraction, not m.truth.fraud))
            if (not m.truth.fraud
                    and m.truth.novelty_level >= HIGH_NOVELTY_CUTOFF):
                high_nov_trad[1] += 1
                if not pd.accept:
                    high_nov_trad[0] += 1

    semi_curve = empirical_roc(semi_scored, strategy_label="semi-automated")
    trad_curve = empirical_roc(trad_scored, strategy_label="traditional-panel")
    separation = {
        "high_novelty_cutoff": HIGH_NOVELTY_CUTOFF,
        "semi_rejection_rate": (high_nov_semi[0] / high_nov_semi[1]
                                if high_nov_semi[1] else None),
        "traditional_rejection_rate": (high_nov_trad[0] / high_nov_trad[1]
                                       if high_nov_trad[1] else None),
        "high_novelty_legit_count": high_nov_semi[1],
    }
    report = SimulationReport(
        config=config.to_dict(), master_seed=sim.master_seed,
        rounds=tuple(summaries),
        convergence={"converged": first_converged is not None,
                     "first_round": first_converged,
                     "window": sim.convergence_window, "tol": sim.convergence_tol},
        auc_semi=auc(semi_curve), auc_traditional=auc(trad_curve),
        separation=separation,
        curves={"semi": downsample_curve(semi_curve).to_dict(),
                "traditional": downsample_curve(trad_curve).to_dict()},
        full_curves={"semi": semi_curve, "traditional": trad_curve})
    return report, round_logs if keep_round_logs else []


def scored_from_round_logs(logs: Sequence[RoundLog]) -> list[tuple[float, bool]]:
    """(composite, is-legitimate) pairs for empirical ROC, labels from verdicts."""
    scored: list[tuple[float, bool]] = []
    for log in logs:
        verdict_map = {v.manuscript_id: v.verdict for v in log.verdicts}
        for d in log.decisions:
            label = verdict_map.get(d.manuscript_id)
            if label is None:
                continue
            scored.append((d.composite, label is not VerdictClass.FRAUDULENT))
    return scored
