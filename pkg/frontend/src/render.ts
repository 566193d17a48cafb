/** HTML renderers. Pure string builders so they stay testable without a DOM. */

import type { MetricsRoundsPayload, QueueItem, RocPayload } from "./types";
import type { QueueState } from "./queue";
import { trendPolyline, trendSeries, rocPolyline, verbatim } from "./dashboard";

const RULE_NAMES = [
  "methods",
  "reasoning",
  "plagiarism",
  "references_self_citation",
  "conventionality",
  "graphical_analytical",
];

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderRetryBanner(message: string): string {
  return `<div class="banner error" data-role="retry-banner">` +
    `${escapeHtml(message)} <button data-action="retry">Retry</button></div>`;
}

export function renderNotice(message: string): string {
  return `<div class="banner notice">${escapeHtml(message)}</div>`;
}

export function renderQueue(state: QueueState, selectedId: string | null): string {
  if (state.kind === "round-closed") {
    const text = state.allComplete
      ? `All rounds complete (${state.roundsCompleted} closed).`
      : `Round closed. ${state.roundsCompleted} round(s) completed so far.`;
    return `<div class="empty-state" data-role="round-closed">${text}</div>`;
  }
  const rows = state.items
    .map((item) => renderQueueRow(item, item.manuscript_id === selectedId))
    .join("");
  return (
    `<h2>Round ${state.round} queue (${state.items.length} pending)</h2>` +
    `<ul class="queue" data-role="queue">${rows}</ul>`
  );
}

function renderQueueRow(item: QueueItem, selected: boolean): string {
  const classes = ["queue-item", `flag-${item.novelty.level}`];
  if (selected) classes.push("selected");
  const detail = selected ? renderRuleBreakdown(item) : "";
  return (
    `<li class="${classes.join(" ")}" data-id="${escapeHtml(item.manuscript_id)}">` +
    `<span class="id">${escapeHtml(item.manuscript_id)}</span>` +
    `<span class="triage">${escapeHtml(item.triage)}</span>` +
    `<span class="action">${escapeHtml(item.action)}</span>` +
    `<span class="flag">${item.novelty.level} (${verbatim(item.novelty.bits)} bits)</span>` +
    renderVerdictButtons(item.manuscript_id) +
    detail +
    `</li>`
  );
}

function renderVerdictButtons(manuscriptId: string): string {
  const id = escapeHtml(manuscriptId);
  return (
    `<span class="verdicts">` +
    `<button data-verdict="legitimate" data-id="${id}">legitimate</button>` +
    `<button data-verdict="below_threshold" data-id="${id}">below threshold</button>` +
    `<button data-verdict="fraudulent" data-id="${id}">fraudulent</button>` +
    `</span>`
  );
}

export function renderRuleBreakdown(item: QueueItem): string {
  const rows = RULE_NAMES.map((name, i) => {
    const bit = item.bits[i] ?? "?";
    const score = item.scores[i];
    return (
      `<tr><td>${name}</td>` +
      `<td>${score === undefined ? "?" : verbatim(score)}</td>` +
      `<td>${bit === "1" ? "pass" : "fail"}</td></tr>`
    );
  }).join("");
  return (
    `<table class="rule-breakdown" data-role="breakdown">` +
    `<thead><tr><th>rule</th><th>score</th><th>bit</th></tr></thead>` +
    `<tbody>${rows}</tbody>` +
    `<tfoot><tr><td>composite</td><td colspan="2">${verbatim(item.composite)}</td></tr></tfoot>` +
    `</table>`
  );
}

/** Lookup from a JSON path to the payload's exact number literal. */
export type LiteralLookup = (path: string) => string | undefined;

const NO_LITERALS: LiteralLookup = () => undefined;

export function renderDashboard(
  metrics: MetricsRoundsPayload,
  roc: RocPayload,
  metricsLit: LiteralLookup = NO_LITERALS,
  rocLit: LiteralLookup = NO_LITERALS,
): string {
  if (metrics.rounds.length === 0) {
    return `<div class="empty-state" data-role="no-rounds">No completed rounds yet.</div>`;
  }
  const table = renderMetricsTable(metrics, metricsLit);
  const trends = trendSeries(metrics)
    .map((series) => {
      const line = trendPolyline(series, 360, 120);
      return (
        `<figure class="trend"><figcaption>${series.label}</figcaption>` +
        `<svg viewBox="0 0 360 120"><polyline fill="none" points="${line}"/></svg>` +
        `</figure>`
      );
    })
    .join("");
  const curves = roc.curves
    .map(
      (curve) =>
        `<g data-label="${escapeHtml(curve.strategy_label)}">` +
        `<polyline fill="none" points="${rocPolyline(curve, 240, 240)}"/></g>`,
    )
    .join("");
  const legend = roc.curves
    .map((curve, i) => {
      const auc = rocLit(`curves[${i}].auc`) ?? verbatim(curve.auc);
      return `<li>${escapeHtml(curve.strategy_label)} (AUC ${auc})</li>`;
    })
    .join("");
  return (
    table +
    `<div class="trends">${trends}</div>` +
    `<figure class="roc"><svg viewBox="0 0 240 240">${curves}</svg>` +
    `<ul class="legend">${legend}</ul></figure>`
  );
}

export function renderMetricsTable(
  metrics: MetricsRoundsPayload,
  lit: LiteralLookup = NO_LITERALS,
): string {
  const rows = metrics.rounds
    .map((entry, i) => {
      const m = entry.metrics;
      const show = (field: string, value: number) =>
        lit(`rounds[${i}].metrics.${field}`) ?? verbatim(value);
      const cells = m
        ? `<td>${show("hit", m.hit)}</td><td>${show("fa", m.fa)}</td>` +
          `<td>${show("d_prime", m.d_prime)}</td>` +
          `<td>${show("criterion_c", m.criterion_c)}</td>` +
          `<td>${show("beta", m.beta)}</td>`
        : `<td colspan="5">not computable</td>`;
      const xc = lit(`rounds[${i}].calibration.x_c`) ??
        verbatim(entry.calibration.x_c);
      return `<tr><td>${entry.round}</td><td>${xc}</td>${cells}</tr>`;
    })
    .join("");
  return (
    `<table class="metrics" data-role="metrics">` +
    `<thead><tr><th>round</th><th>x_c</th><th>hit</th><th>fa</th>` +
    `<th>d&#8242;</th><th>C</th><th>&#946;</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}
