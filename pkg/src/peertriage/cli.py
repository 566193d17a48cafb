"""Command-line interface.

Commands: generate, simulate, roc, report, serve.  Run with -h for usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .config import PipelineConfig, load_config
from .corpus import generate_corpus, save_corpus
from .orchestrator import run_simulation
from .roc import auc, empirical_roc, theoretical_roc, write_curve_csv


def _load_or_default_config(path: str | None) -> PipelineConfig:
    return load_config(path) if path else PipelineConfig()


def cmd_generate(args: argparse.Namespace) -> int:
    config = _load_or_default_config(args.config)
    corpus_cfg = config.corpus
    overrides = {}
    if args.n is not None:
        overrides["n"] = args.n
    if args.fraud_rate is not None:
        overrides["fraud_rate"] = args.fraud_rate
    if args.seed is not None:
        overrides["seed"] = args.seed
    if overrides:
        corpus_cfg = replace(corpus_cfg, **overrides)
    corpus = generate_corpus(corpus_cfg)
    save_corpus(corpus, args.out)
    n_fraud = sum(1 for m in corpus if m.truth and m.truth.fraud)
    print(f"wrote {len(corpus)} manuscripts ({n_fraud} fraudulent) to {args.out}")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    config = _load_or_default_config(args.config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    report, logs = run_simulation(config)
    (out_dir / "report.json").write_text(report.to_json(), encoding="utf-8")
    with open(out_dir / "rounds.jsonl", "w", encoding="utf-8") as fh:
        for log in logs:
            fh.write(json.dumps(log.to_record()) + "\n")
    for name, curve in report.full_curves.items():
        write_curve_csv(curve, out_dir / f"roc_{name}.csv")
    print(f"simulation complete: {len(report.rounds)} rounds -> {out_dir}")
    if report.auc_semi is not None:
        print(f"AUC semi-automated: {report.auc_semi:.4f}")
        print(f"AUC traditional:    {report.auc_traditional:.4f}")
        conv = report.convergence
        state = f"round {conv['first_round']}" if conv["converged"] else "never"
        print(f"criterion converged: {state} "
              f"(window {conv['window']}, tol {conv['tol']})")
    return 0


def cmd_roc(args: argparse.Namespace) -> int:
    if args.from_log:
        scored = []
        with open(args.from_log, "r", encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                rec = json.loads(line)
                verdicts = {v["manuscript_id"]: v["verdict"]
                            for v in rec.get("verdicts", [])}
                for d in rec["decisions"]:
                    label = verdicts.get(d["manuscript_id"])
                    if label is None:
                        continue
                    scored.append((d["composite"], label != "fraudulent"))
        curve = empirical_roc(scored, strategy_label="from-log")
    else:
        if args.dprime is None:
            print("roc requires either --dprime or --from-log", file=sys.stderr)
            return 2
        curve = theoretical_roc(args.dprime, args.points)
    area = auc(curve)
    if args.out:
        write_curve_csv(curve, args.out)
        print(f"wrote {len(curve.points)} points to {args.out} (AUC {area:.4f})")
    else:
        print(f"AUC {area:.6f} over {len(curve.points)} points")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    log_dir = Path(args.log)
    report_path = log_dir / "report.json"
    if not report_path.exists():
        print(f"no report.json under {log_dir}", file=sys.stderr)
        return 2
    doc = json.loads(report_path.read_text(encoding="utf-8"))
    header = (f"{'round':>5} {'x_c':>8} {'hit':>7} {'fa':>7} "
              f"{'d_prime':>8} {'C':>7} {'beta':>8} {'accept':>7}")
    print(header)
    print("-" * len(header))
    for r in doc.get("rounds", []):
        m = r.get("metrics") or {}
        print(f"{r['round']:>5} {r['x_c']:>8.4f} {m.get('hit', float('nan')):>7.4f} "
              f"{m.get('fa', float('nan')):>7.4f} {m.get('d_prime', float('nan')):>8.4f} "
              f"{m.get('criterion_c', float('nan')):>7.4f} "
              f"{m.get('beta', float('nan')):>8.4f} {r['accept_rate']:>7.4f}")
    if doc.get("auc_semi") is not None:
        print(f"\nAUC semi-automated: {doc['auc_semi']:.4f}")
        print(f"AUC traditional:    {doc['auc_traditional']:.4f}")
        sep = doc.get("separation", {})
        if sep.get("semi_rejection_rate") is not None:
            print(f"high-novelty legit rejection: semi {sep['semi_rejection_rate']:.4f}"
                  f" vs traditional {sep['traditional_rejection_rate']:.4f}")
        conv = doc.get("convergence", {})
        state = f"round {conv.get('first_round')}" if conv.get("converged") else "never"
        print(f"criterion converged: {state}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    config = _load_or_default_config(args.config)
    serve(config, host=args.host, port=args.port, state_dir=args.state_dir)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="peertriage",
        description="Semi-automated manuscript triage toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a synthetic corpus (JSONL)")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--fraud-rate", type=float, default=None, dest="fraud_rate")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("simulate", help="run the adaptive loop plus panel baseline")
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("roc", help="emit a theoretical or log-derived ROC curve")
    p.add_argument("--dprime", type=float, default=None)
    p.add_argument("--points", type=int, default=4096)
    p.add_argument("--from-log", default=None, dest="from_log",
                   help="rounds.jsonl produced by simulate or serve")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_roc)

    p = sub.add_parser("report", help="print the per-round table and AUC summary")
    p.add_argument("--log", required=True, help="directory written by simulate")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="run the human-review HTTP service")
    p.add_argument("--config", default=None)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--state-dir", default=None, dest="state_dir")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
