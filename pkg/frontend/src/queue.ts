/** Queue presentation logic: ordering, states, and verdict outcomes. */

import type { FlagLevel, QueueItem, QueuePayload } from "./types";
import { ApiError } from "./api";

const FLAG_RANK: Record<FlagLevel, number> = { low: 0, moderate: 1, high: 2 };

export function flagRank(level: FlagLevel): number {
  return FLAG_RANK[level];
}

/** Novelty flag descending, then manuscript id ascending. */
export function sortQueueItems(items: QueueItem[]): QueueItem[] {
  return [...items].sort((a, b) => {
    const byFlag = FLAG_RANK[b.novelty.level] - FLAG_RANK[a.novelty.level];
    if (byFlag !== 0) return byFlag;
    return a.manuscript_id < b.manuscript_id ? -1 : a.manuscript_id > b.manuscript_id ? 1 : 0;
  });
}

export type QueueState =
  | { kind: "open"; round: number; items: QueueItem[] }
  | { kind: "round-closed"; roundsCompleted: number; allComplete: boolean };

export function queueState(payload: QueuePayload): QueueState {
  if (payload.items.length === 0) {
    return {
      kind: "round-closed",
      roundsCompleted: payload.rounds_completed,
      allComplete: payload.all_rounds_complete,
    };
  }
  return {
    kind: "open",
    round: payload.round as number,
    items: sortQueueItems(payload.items),
  };
}

export type SubmitOutcome =
  | { kind: "accepted"; removedId: string; roundClosed: boolean; superseded: boolean }
  | { kind: "round-closed-notice" }
  | { kind: "stale-item"; refresh: true }
  | { kind: "invalid"; detail: string };

/** Map a submit result or ApiError to what the queue view should do. */
export function submitOutcome(
  manuscriptId: string,
  result: { round_closed: boolean; superseded_previous: boolean } | ApiError,
): SubmitOutcome {
  if (result instanceof ApiError) {
    if (result.status === 409) return { kind: "round-closed-notice" };
    if (result.status === 404) return { kind: "stale-item", refresh: true };
    return { kind: "invalid", detail: result.detail };
  }
  return {
    kind: "accepted",
    removedId: manuscriptId,
    roundClosed: result.round_closed,
    superseded: result.superseded_previous,
  };
}

export function removeItem(items: QueueItem[], manuscriptId: string): QueueItem[] {
  return items.filter((it) => it.manuscript_id !== manuscriptId);
}
