import json

import pytest

from peertriage.adapt import CalibrationState
from peertriage.config import (ClassifierConfig, OracleConfig, PanelConfig,
                               PipelineConfig, SimulationConfig)
from peertriage.corpus import CorpusConfig, GroundTruth, generate_corpus
from peertriage.errors import ValidationError
from peertriage.novelty import FlagLevel
from peertriage.orchestrator import (Action, Decision, RoundRunner,
                                     SimulatedOracle, VerdictClass,
                                     compute_confusion, final_action,
                                     run_round, run_simulation, truth_class)
from peertriage.roc import auc, empirical_roc
from peertriage.rules import DiscriminantModel, Ruleset
from peertriage.panel import batch_novelty_bits, simulate_traditional_panel

from conftest import make_manuscript


def small_config(**sim_kwargs) -> PipelineConfig:
    sim = SimulationConfig(**{"rounds": 3, "n_per_round": 400,
                              "master_seed": 7, **sim_kwargs})
    return PipelineConfig(simulation=sim)


def accept_all_classifier() -> ClassifierConfig:
    model = DiscriminantModel(weights=Ruleset.default().weights, offset=0.0,
                              t_fraud=-0.2, t_accept=-0.1)
    return ClassifierConfig(mode="discriminant", adaptive=False, model=model)


class TestRunRound:
    def test_accept_all_has_no_rejections(self):
        config = PipelineConfig(classifier=accept_all_classifier())
        batch = generate_corpus(CorpusConfig(n=100, fraud_rate=0.1, seed=3))
        oracle = SimulatedOracle(config.oracle, seed=1)
        log, _ = run_round(batch, config, CalibrationState(), oracle)
        assert log.confusion.fn == 0
        assert log.confusion.tn == 0
        binary = sum(1 for v in log.verdicts
                     if v.verdict is not VerdictClass.BELOW_THRESHOLD)
        assert log.confusion.tp + log.confusion.fp == binary

    def test_truth_classifier_with_perfect_oracle(self):
        config = PipelineConfig(classifier=ClassifierConfig(mode="truth"))
        batch = generate_corpus(CorpusConfig(n=200, fraud_rate=0.15, seed=5))
        oracle = SimulatedOracle(config.oracle, seed=1)
        log, _ = run_round(batch, config, CalibrationState(), oracle)
        assert log.confusion.fp == 0
        assert log.confusion.fn == 0
        recomputed = compute_confusion(
            log.decisions, {v.manuscript_id: v.verdict for v in log.verdicts})
        assert recomputed == log.confusion

    def test_every_manuscript_decided_exactly_once(self):
        config = small_config()
        batch = generate_corpus(CorpusConfig(n=150, seed=8))
        oracle = SimulatedOracle(config.oracle, seed=2)
        log, _ = run_round(batch, config, CalibrationState(), oracle)
        assert sorted(d.manuscript_id for d in log.decisions) == \
            sorted(m.id for m in batch)

    def test_round_log_replay_identical(self):
        config = small_config()
        batch = generate_corpus(CorpusConfig(n=120, seed=4))
        a, _ = run_round(batch, config, CalibrationState(),
                         SimulatedOracle(config.oracle, seed=9))
        b, _ = run_round(batch, config, CalibrationState(),
                         SimulatedOracle(config.oracle, seed=9))
        assert json.dumps(a.to_record()) == json.dumps(b.to_record())

    def test_confusion_recomputable(self):
        config = small_config()
        batch = generate_corpus(CorpusConfig(n=300, seed=12))
        oracle = SimulatedOracle(config.oracle, seed=3)
        log, _ = run_round(batch, config, CalibrationState(), oracle)
        labels = {v.manuscript_id: v.verdict for v in log.verdicts}
        assert compute_confusion(log.decisions, labels) == log.confusion

    def test_review_all_reviews_everything(self):
        config = small_config()
        batch = generate_corpus(CorpusConfig(n=50, seed=1))
        runner = RoundRunner(config, review_mode="all")
        log = runner.run_round(batch, oracle=SimulatedOracle(config.oracle, seed=1))
        assert all(d.needs_human for d in log.decisions)
        assert len(log.verdicts) == 50

    def test_flagged_mode_protects_novelty(self):
        config = small_config()
        batch = generate_corpus(CorpusConfig(n=400, seed=21))
        runner = RoundRunner(config, review_mode="flagged")
        log = runner.run_round(batch, oracle=SimulatedOracle(config.oracle, seed=1))
        flagged = [d for d in log.decisions
                   if d.novelty_flag.level in (FlagLevel.MODERATE, FlagLevel.HIGH)]
        assert flagged, "expected at least one flagged manuscript"
        assert all(d.needs_human for d in flagged)
        reviewed_ids = {v.manuscript_id for v in log.verdicts}
        assert {d.manuscript_id for d in flagged} <= reviewed_ids

    def test_calibration_advances(self):
        config = small_config()
        batch = generate_corpus(CorpusConfig(n=200, seed=2))
        runner = RoundRunner(config)
        assert runner.calibration.round == 0
        runner.run_round(batch, oracle=SimulatedOracle(config.oracle, seed=1))
        assert runner.calibration.round == 1
        assert len(runner.calibration.history) == 1

    def test_oracle_failure_leaves_state_unchanged(self):
        config = small_config()
        batch = generate_corpus(CorpusConfig(n=50, seed=2))
        runner = RoundRunner(config)

        class FailingOracle:
            def verdict(self, m):
                raise RuntimeError("expert unavailable")

        before = runner.calibration
        with pytest.raises(RuntimeError):
            runner.run_round(batch, oracle=FailingOracle())
        assert runner.calibration == before
        assert runner.fraud_stats.count == 0

    def test_empty_batch_rejected(self):
        config = small_config()
        runner = RoundRunner(config)
        with pytest.raises(ValidationError):
            runner.run_round([], oracle=SimulatedOracle(config.oracle, seed=0))

    def test_duplicate_ids_rejected(self):
        config = small_config()
        runner = RoundRunner(config)
        batch = [make_manuscript("m1", truth=GroundTruth(False, 0.8, 0.2))] * 2
        with pytest.raises(ValidationError):
            runner.run_round(batch, oracle=SimulatedOracle(config.oracle, seed=0))


class TestOracleAndActions:
    def test_truth_class_mapping(self):
        cut = 0.4
        fraud = make_manuscript("f", truth=GroundTruth(True, 0.9, 0.5))
        weak = make_manuscript("w", truth=GroundTruth(False, 0.2, 0.5))
        good = make_manuscript("g", truth=GroundTruth(False, 0.8, 0.5))
        assert truth_class(fraud, cut) is VerdictClass.FRAUDULENT
        assert truth_class(weak, cut) is VerdictClass.BELOW_THRESHOLD
        assert truth_class(good, cut) is VerdictClass.LEGITIMATE

    def test_perfect_oracle_reports_truth(self):
        oracle = SimulatedOracle(OracleConfig(), seed=0)
        m = make_manuscript("m", truth=GroundTruth(True, 0.1, 0.1))
        assert oracle.verdict(m).verdict is VerdictClass.FRAUDULENT

    def test_zero_accuracy_never_reports_truth(self):
        oracle = SimulatedOracle(OracleConfig(accuracy_fraudulent=0.0), seed=0)
        m = make_manuscript("m", truth=GroundTruth(True, 0.1, 0.1))
        for _ in range(20):
            assert oracle.verdict(m).verdict is not VerdictClass.FRAUDULENT

    def test_timestamps_are_sequential(self):
        oracle = SimulatedOracle(OracleConfig(), seed=0)
        m = make_manuscript("m", truth=GroundTruth(False, 0.9, 0.2))
        t0 = oracle.verdict(m).timestamp
        t1 = oracle.verdict(m).timestamp
        assert int(t1) == int(t0) + 1

    def test_final_action_override(self):
        d = Decision.from_record({
            "manuscript_id": "m", "triage": "fraudulent", "action": "reject",
            "novelty_flag": {"level": "high", "bits": 2.0},
            "needs_human": True, "composite": 0.5, "bits": "110111"})
        oracle = SimulatedOracle(OracleConfig(), seed=0)
        legit = make_manuscript("m", truth=GroundTruth(False, 0.9, 0.9))
        verdict = oracle.verdict(legit)
        assert final_action(d, verdict) is Action.ACCEPT
        assert final_action(d, None) is Action.REJECT


class TestPanel:
    def make_batch(self, n=2000, seed=3, fraud_rate=0.1):
        return generate_corpus(CorpusConfig(n=n, fraud_rate=fraud_rate, seed=seed))

    def test_chance_reviewer_gives_chance_auc(self):
        batch = self.make_batch(n=10_000, seed=31)
        panel = PanelConfig(k=1, reviewer_dprime_mean=0.0,
                            reviewer_dprime_spread=0.0, criterion_mean=0.0,
                            novelty_aversion=0.0)
        decisions, _ = simulate_traditional_panel(batch, panel, seed=5)
        by_id = {m.id: m for m in batch}
        scored = [(d.vote_fraction, not by_id[d.manuscript_id].truth.fraud)
                  for d in decisions]
        assert auc(empirical_roc(scored)) == pytest.approx(0.5, abs=0.02)

    def test_unanimous_accepts_subset_of_majority(self):
        batch = self.make_batch(n=1000, seed=17)
        maj = PanelConfig(k=3, editor_rule="majority")
        una = PanelConfig(k=3, editor_rule="unanimous")
        d_maj, _ = simulate_traditional_panel(batch, maj, seed=11)
        d_una, _ = simulate_traditional_panel(batch, una, seed=11)
        maj_ids = {d.manuscript_id for d in d_maj if d.accept}
        una_ids = {d.manuscript_id for d in d_una if d.accept}
        assert una_ids <= maj_ids
        assert len(una_ids) < len(maj_ids)

    def test_novelty_aversion_penalizes_novel_work(self):
        batch = self.make_batch(n=10_000, seed=23, fraud_rate=0.0)
        panel = PanelConfig(k=2, novelty_aversion=1.0)
        decisions, _ = simulate_traditional_panel(batch, panel, seed=7)
        by_id = {m.id: m for m in batch}
        high = [d for d in decisions if by_id[d.manuscript_id].truth.novelty_level >= 0.7]
        low = [d for d in decisions if by_id[d.manuscript_id].truth.novelty_level < 0.4]
        rate = lambda ds: sum(1 for d in ds if d.accept) / len(ds)
        assert rate(high) < rate(low)

    def test_deterministic_per_seed(self):
        batch = self.make_batch(n=200, seed=2)
        panel = PanelConfig()
        a = simulate_traditional_panel(batch, panel, seed=9)
        b = simulate_traditional_panel(batch, panel, seed=9)
        assert a == b

    def test_requires_truth(self):
        batch = [make_manuscript("m1"), make_manuscript("m2")]
        with pytest.raises(ValidationError):
            simulate_traditional_panel(batch, PanelConfig(), seed=1)

    def test_confusion_matches_decisions(self):
        batch = self.make_batch(n=500, seed=6)
        decisions, ct = simulate_traditional_panel(batch, PanelConfig(), seed=2)
        by_id = {m.id: m for m in batch}
        tp = sum(1 for d in decisions
                 if d.accept and not by_id[d.manuscript_id].truth.fraud)
        fp = sum(1 for d in decisions
                 if d.accept and by_id[d.manuscript_id].truth.fraud)
        assert ct.tp == tp and ct.fp == fp
        assert ct.total == len(batch)

    def test_novelty_bits_helper(self):
        batch = self.make_batch(n=100, seed=4)
        bits = batch_novelty_bits(batch)
        assert set(bits) == {m.id for m in batch}
        assert all(v >= 0 for v in bits.values())


class TestSimulation:
    def test_zero_rounds_gives_config_echo(self):
        config = small_config(rounds=0)
        report, logs = run_simulation(config)
        assert report.rounds == ()
        assert logs == []
        assert report.config == config.to_dict()
        assert report.auc_semi is None

    def test_replay_determinism(self):
        config = small_config()
        r1, logs1 = run_simulation(config)
        r2, logs2 = run_simulation(config)
        assert r1.to_json() == r2.to_json()
        rec1 = [json.dumps(l.to_record()) for l in logs1]
        rec2 = [json.dumps(l.to_record()) for l in logs2]
        assert rec1 == rec2

    def test_different_seed_differs(self):
        r1, _ = run_simulation(small_config(master_seed=1))
        r2, _ = run_simulation(small_config(master_seed=2))
        assert r1.to_json() != r2.to_json()

    def test_semi_outperforms_panel_on_small_run(self):
        report, _ = run_simulation(small_config(rounds=2, n_per_round=1500))
        assert report.auc_semi > report.auc_traditional

    def test_separation_fields_present(self):
        report, _ = run_simulation(small_config(rounds=1, n_per_round=1500))
        sep = report.separation
        assert sep["semi_rejection_rate"] is not None
        assert sep["traditional_rejection_rate"] is not None
        assert sep["high_novelty_legit_count"] > 0

    def test_round_summaries_shape(self):
        report, logs = run_simulation(small_config(rounds=2, n_per_round=300))
        assert len(report.rounds) == 2
        for summary, log in zip(report.rounds, logs):
            assert summary["round"] == log.round
            assert summary["confusion"] == log.confusion.to_dict()
            assert 0.0 <= summary["accept_rate"] <= 1.0
            assert sum(summary["novelty_flags"].values()) == summary["n"]

    def test_fingerprints_stable(self):
        config = small_config(rounds=1, n_per_round=100)
        _, logs1 = run_simulation(config)
        _, logs2 = run_simulation(config)
        assert logs1[0].config_fingerprint == logs2[0].config_fingerprint
        assert logs1[0].batch_fingerprint == logs2[0].batch_fingerprint
