"""peertriage: semi-automated manuscript triage with adaptive calibration.

Rule-based triage, novelty flagging, signal-detection metrics, ROC analysis,
and a criterion-calibration loop closed by human (or simulated) review.
"""

from .adapt import AdaptPolicy, CalibrationState, has_converged, update_criterion
from .config import (ClassifierConfig, NoveltyConfig, OracleConfig, PanelConfig,
                     PipelineConfig, ServiceConfig, SimulationConfig,
                     load_config, save_config)
from .corpus import (CATEGORIES, ClampAudit, CorpusConfig, CorpusStats,
                     FeatureModel, GaussianSpec, GroundTruth, Manuscript,
                     RuleCategory, corpus_stats, generate_corpus,
                     generate_corpus_audited, load_corpus, save_corpus)
from .novelty import (FlagLevel, NoveltyFlag, NoveltyScore, ProbTable,
                      corpus_novelty, flag_novelty, manuscript_novelty)
from .orchestrator import (Action, Decision, HumanVerdict, RoundLog, RoundRunner,
                           SimulatedOracle, SimulationReport, VerdictClass,
                           compute_confusion, final_action, run_round,
                           run_simulation)
from .panel import PanelDecision, batch_novelty_bits, simulate_traditional_panel
from .roc import (RocCurve, auc, downsample_curve, empirical_roc, pairwise_auc,
                  read_curve_csv, theoretical_roc, write_curve_csv)
from .rules import (ContingencyTree, DiscriminantModel, Direction, Rule,
                    RuleOutcome, Ruleset, TriageClass, discriminant_classify,
                    evaluate_rules, fit_discriminant, tree_classify)
from .sdt import (ConfusionTable, CriterionState, Rates, SdtMetrics,
                  beta_density_ratio, beta_from_dc, contingency_from_rates,
                  criterion_c, d_prime, normal_cdf, normal_pdf, normal_quantile,
                  rates_from_confusion, simulate_observer)

__version__ = "0.1.0"
