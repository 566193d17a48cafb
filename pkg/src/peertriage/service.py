"""HTTP service hosting the human-supervision step for live rounds.

Endpoints (JSON):
  GET  /api/queue           pending decisions needing human verdicts
  POST /api/verdicts        {manuscript_id, verdict, reviewer_id}
  GET  /api/metrics/rounds  per-round metrics plus calibration history
  GET  /api/roc             current empirical curves as point lists

Status codes: 200 success, 400 malformed, 404 unknown id, 409 round closed.
Verdicts are appended to an audit log and fsynced before acknowledgment;
a round closes automatically when its queue drains, which computes metrics,
advances the calibration, and opens the next round.
"""

from __future__ import annotations

import json
import os
import threading
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .config import PipelineConfig
from .corpus import Manuscript, generate_corpus, load_corpus
from .errors import RoundClosedError
from .novelty import FlagLevel, flag_rank
from .orchestrator import (Decision, HumanVerdict, RoundLog, RoundRunner,
                           VerdictClass, scored_from_round_logs)
from .roc import auc, empirical_roc
from .rules import evaluate_rules


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class ReviewService:
    """Serialized round lifecycle over a corpus, fed by posted verdicts."""

    def __init__(self, config: PipelineConfig, state_dir: str | Path | None = None):
        self.config = config
        self.state_dir = Path(state_dir or config.service.state_dir)
        self.state_dir.mkdir(parents=True, exist_ok=True)
        if config.service.corpus_path:
            corpus = load_corpus(config.service.corpus_path)
        else:
            corpus = generate_corpus(config.corpus)
        size = config.service.batch_size
        self._batches = [corpus[i:i + size] for i in range(0, len(corpus), size)]
        self._runner = RoundRunner(config, review_mode=config.service.review_mode)
        self._lock = threading.Lock()
        self._audit_path = self.state_dir / "verdicts.jsonl"
        self._rounds_path = self.state_dir / "rounds.jsonl"
        self._round_logs: list[RoundLog] = []
        self._batch_index = -1
        self._batch: list[Manuscript] = []
        self._batch_by_id: dict[str, Manuscript] = {}
        self._decisions: dict[str, Decision] = {}
        self._verdicts: dict[str, HumanVerdict] = {}
        self._pending: set[str] = set()
        self._seen_ids: set[str] = set()
        self._open_next_round()

    # -- round lifecycle ---------------------------------------------------

    @property
    def round_open(self) -> bool:
        return self._batch_index < len(self._batches)

    @property
    def current_round(self) -> int | None:
        return self._runner.calibration.round if self.round_open else None

    def _open_next_round(self) -> None:
        # rounds with nothing to review close themselves immediately
        while True:
            self._batch_index += 1
            if self._batch_index >= len(self._batches):
                self._batch = []
                self._batch_by_id = {}
                self._decisions = {}
                self._pending = set()
                return
            self._batch = self._batches[self._batch_index]
            self._batch_by_id = {m.id: m for m in self._batch}
            decisions = self._runner.classify(self._batch)
            self._decisions = {d.manuscript_id: d for d in decisions}
            self._verdicts = {}
            self._pending = {d.manuscript_id for d in decisions if d.needs_human}
            self._seen_ids.update(self._decisions)
            if self._pending:
                return
            self._close_round()

    def _close_round(self) -> None:
        log = self._runner.finalize(self._batch, list(self._decisions.values()),
                                    list(self._verdicts.values()),
                                    require_labels=False)
        self._round_logs.append(log)
        with open(self._rounds_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(log.to_record()) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def _append_audit(self, verdict: HumanVerdict, superseded: bool) -> None:
        rec = verdict.to_record() | {"round": self._runner.calibration.round,
                                     "superseded_previous": superseded}
        with open(self._audit_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(rec) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    # -- endpoint payloads ---------------------------------------------------

    def queue(self) -> dict:
        with self._lock:
            items = []
            for mid in self._pending:
                d = self._decisions[mid]
                outcome = evaluate_rules(self._batch_by_id[mid], self.config.ruleset)
                items.append({
                    "manuscript_id": mid,
                    "round": self._runner.calibration.round,
                    "triage": d.triage.value,
                    "action": d.action.value,
                    "bits": d.bits,
                    "scores": list(outcome.scores),
                    "composite": d.composite,
                    "novelty": d.novelty_flag.to_dict(),
                })
            items.sort(key=lambda it: (-flag_rank(FlagLevel(it["novelty"]["level"])),
                                       it["manuscript_id"]))
            return {"round": self.current_round,
                    "round_open": self.round_open and bool(self._pending),
                    "rounds_completed": len(self._round_logs),
                    "all_rounds_complete": not self.round_open,
                    "items": items}

    def submit_verdict(self, manuscript_id: str, verdict: str,
                       reviewer_id: str) -> dict:
        try:
            verdict_class = VerdictClass(verdict)
        except ValueError:
            raise ValueError(
                f"verdict must be one of {[v.value for v in VerdictClass]}, "
                f"got {verdict!r}")
        with self._lock:
            if manuscript_id not in self._seen_ids:
                raise KeyError(f"unknown manuscript id {manuscript_id!r}")
            if not self.round_open or manuscript_id not in self._decisions:
                raise RoundClosedError(
                    f"manuscript {manuscript_id!r} belongs to a closed round")
            hv = HumanVerdict(manuscript_id=manuscript_id, verdict=verdict_class,
                              reviewer_id=reviewer_id, timestamp=_now())
            superseded = manuscript_id in self._verdicts
            self._append_audit(hv, superseded)
            self._verdicts[manuscript_id] = hv
            self._pending.discard(manuscript_id)
            round_no = self._runner.calibration.round
            round_closed = False
            if not self._pending:
                self._close_round()
                self._open_next_round()
                round_closed = True
            return {"status": "accepted", "round": round_no,
                    "superseded_previous": superseded,
                    "round_closed": round_closed}

    def metrics_rounds(self) -> dict:
        with self._lock:
            return {
                "rounds": [{
                    "round": log.round,
                    "metrics": log.metrics.to_dict() if log.metrics else None,
                    "confusion": log.confusion.to_dict(),
                    "calibration": log.calibration,
                } for log in self._round_logs],
                "calibration_history": [list(h) for h in
                                        self._runner.calibration.history],
                "current_x_c": self._runner.calibration.x_c,
            }

    def roc_payload(self) -> dict:
        with self._lock:
            scored = scored_from_round_logs(self._round_logs)
            curves = []
            has_both = (any(s for _, s in scored)
                        and any(not s for _, s in scored))
            if has_both:
                curve = empirical_roc(scored, strategy_label="semi-automated")
                curves.append(curve.to_dict() | {"auc": auc(curve)})
            return {"curves": curves}


def create_app(service: ReviewService) -> FastAPI:
    app = FastAPI(title="peertriage review service")

    @app.get("/api/queue")
    def get_queue():
        return service.queue()

    @app.post("/api/verdicts")
    async def post_verdict(request: Request):
        try:
            body = await request.json()
        except Exception:
            return JSONResponse({"error": "request body is not valid JSON"},
                                status_code=400)
        if not isinstance(body, dict):
            return JSONResponse({"error": "request body must be a JSON object"},
                                status_code=400)
        missing = [k for k in ("manuscript_id", "verdict", "reviewer_id")
                   if k not in body]
        if missing:
            return JSONResponse({"error": f"missing fields {missing}"},
                                status_code=400)
        try:
            result = service.submit_verdict(str(body["manuscript_id"]),
                                            str(body["verdict"]),
                                            str(body["reviewer_id"]))
        except KeyError as exc:
            return JSONResponse({"error": str(exc)}, status_code=404)
        except RoundClosedError as exc:
            return JSONResponse({"error": str(exc)}, status_code=409)
        except ValueError as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        return result

    @app.get("/api/metrics/rounds")
    def get_metrics():
        return service.metrics_rounds()

    @app.get("/api/roc")
    def get_roc():
        return service.roc_payload()

    return app


def serve(config: PipelineConfig, host: str = "127.0.0.1", port: int = 8000,
          state_dir: str | None = None) -> None:
    """Run the review service until interrupted."""
    import uvicorn

    service = ReviewService(config, state_dir=state_dir)
    app = create_app(service)
    uvicorn.run(app, host=host, port=port, log_level="warning")
