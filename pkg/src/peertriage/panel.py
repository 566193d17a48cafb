"""Traditional peer-review baseline: a small panel of noisy SDT reviewers.

Each manuscript is read by k independently drawn reviewers.  A reviewer's
latent evidence is their personal sensitivity times the manuscript's true
quality plus unit normal noise; they vote accept when it clears their
personal criterion shifted up by novelty_aversion times the manuscript's
novelty (in bits).  An editor rule aggregates the votes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .config import PanelConfig
from .corpus import Manuscript
from .errors import ValidationError
from .novelty import ProbTable, manuscript_novelty
from .rules import Ruleset, evaluate_rules
from .sdt import ConfusionTable


@dataclass(frozen=True)
class PanelDecision:
    manuscript_id: str
    votes: int
    k: int
    accept: bool

    @property
    def vote_fraction(self) -> float:
        return self.votes / self.k


def batch_novelty_bits(batch: Sequence[Manuscript],
                       ruleset: Ruleset | None = None) -> dict[str, float]:
    """Novelty in bits for each manuscript, from the batch's own state table."""
    rs = ruleset or Ruleset.default()
    outcomes = [evaluate_rules(m, rs) for m in batch]
    pt = ProbTable.from_outcomes(outcomes)
    return {o.manuscript_id: manuscript_novelty(o, pt).bits for o in outcomes}


def simulate_traditional_panel(
    batch: Sequence[Manuscript],
    panel: PanelConfig,
    seed: int,
    novelty_bits: Mapping[str, float] | None = None,
) -> tuple[list[PanelDecision], ConfusionTable]:
    """Simulate the panel on a batch with ground truth; deterministic per seed."""
    if not batch:
        raise ValidationError("panel needs a nonempty batch")
    if any(m.truth is None for m in batch):
        raise ValidationError("the panel baseline requires ground truth on every manuscript")
    if novelty_bits is None:
        novelty_bits = batch_novelty_bits(batch)

    n = len(batch)
    quality = np.array([m.truth.quality for m in batch])
    bits = np.array([novelty_bits[m.id] for m in batch])
    rng = np.random.Generator(np.random.PCG64(seed))
    dprimes = rng.normal(panel.reviewer_dprime_mean, panel.reviewer_dprime_spread,
                         (n, panel.k))
    criteria = rng.normal(panel.criterion_mean, panel.reviewer_bias_spread,
                          (n, panel.k))
    noise = rng.standard_normal((n, panel.k))
    evidence = dprimes * quality[:, None] + noise
    thresholds = criteria + panel.novelty_aversion * bits[:, None]
    votes = (evidence > thresholds).sum(axis=1)
    if panel.editor_rule == "unanimous":
        accept = votes == panel.k
    else:
        accept = 2 * votes > panel.k

    decisions = [PanelDecision(manuscript_id=m.id, votes=int(votes[i]),
                               k=panel.k, accept=bool(accept[i]))
                 for i, m in enumerate(batch)]
    fraud = np.array([m.truth.fraud for m in batch])
    tp = int(np.count_nonzero(~fraud & accept))
    fn = int(np.count_nonzero(~fraud & ~accept))
    fp = int(np.count_nonzero(fraud & accept))
    tn = int(np.count_nonzero(fraud & ~accept))
    return decisions, ConfusionTable(tp=tp, fn=fn, fp=fp, tn=tn)
