/** DOM wiring: fetch, render, and verdict submission for the review UI. */

import { ApiClient, ApiError, ServiceUnreachableError } from "./api";
import { queueState, submitOutcome } from "./queue";
import type { Verdict } from "./types";
import {
  renderDashboard,
  renderNotice,
  renderQueue,
  renderRetryBanner,
} from "./render";

const api = new ApiClient("");
let selectedId: string | null = null;

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

async function refreshQueue(): Promise<void> {
  const host = el("queue-panel");
  try {
    const payload = await api.getQueue();
    host.innerHTML = renderQueue(queueState(payload), selectedId);
  } catch (err) {
    if (err instanceof ServiceUnreachableError) {
      host.innerHTML = renderRetryBanner("Service unreachable.");
      return;
    }
    throw err;
  }
}

async function refreshDashboard(): Promise<void> {
  const host = el("dashboard-panel");
  try {
    const [metrics, roc] = await Promise.all([
      api.getMetricsRoundsRaw(),
      api.getRocRaw(),
    ]);
    host.innerHTML = renderDashboard(
      metrics.value,
      roc.value,
      metrics.literal,
      roc.literal,
    );
  } catch (err) {
    if (err instanceof ServiceUnreachableError) {
      host.innerHTML = renderRetryBanner("Service unreachable.");
      return;
    }
    throw err;
  }
}

async function handleVerdict(manuscriptId: string, verdict: Verdict): Promise<void> {
  const notice = el("notice-area");
  let outcome;
  try {
    const ack = await api.submitVerdict(manuscriptId, verdict, reviewerId());
    outcome = submitOutcome(manuscriptId, ack);
  } catch (err) {
    if (err instanceof ApiError) {
      outcome = submitOutcome(manuscriptId, err);
    } else {
      el("queue-panel").innerHTML = renderRetryBanner("Service unreachable.");
      return;
    }
  }
  switch (outcome.kind) {
    case "accepted":
      notice.innerHTML = outcome.superseded
        ? renderNotice(`Verdict for ${manuscriptId} superseded the previous one.`)
        : "";
      break;
    case "round-closed-notice":
      notice.innerHTML = renderNotice("That round already closed.");
      break;
    case "stale-item":
      notice.innerHTML = renderNotice("Item no longer pending; queue refreshed.");
      break;
    case "invalid":
      notice.innerHTML = renderNotice(`Rejected: ${outcome.detail}`);
      break;
  }
  await refreshQueue();
  await refreshDashboard();
}

function reviewerId(): string {
  const input = document.getElementById("reviewer-id") as HTMLInputElement | null;
  return input?.value || "reviewer";
}

function onClick(event: Event): void {
  const target = event.target as HTMLElement;
  if (target.dataset.action === "retry") {
    void refreshQueue();
    void refreshDashboard();
    return;
  }
  const verdict = target.dataset.verdict as Verdict | undefined;
  if (verdict && target.dataset.id) {
    void handleVerdict(target.dataset.id, verdict);
    return;
  }
  const item = target.closest<HTMLElement>(".queue-item");
  if (item && item.dataset.id) {
    selectedId = selectedId === item.dataset.id ? null : item.dataset.id;
    void refreshQueue();
  }
}

export function start(): void {
  document.addEventListener("click", onClick);
  void refreshQueue();
  void refreshDashboard();
}

if (typeof document !== "undefined" && document.getElementById("queue-panel")) {
  start();
}
