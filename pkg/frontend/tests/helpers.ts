import type { QueueItem } from "../src/types";

export function item(overrides: Partial<QueueItem> = {}): QueueItem {
  return {
    manuscript_id: "m000001",
    round: 0,
    triage: "acceptable_needs_work",
    action: "accept",
    bits: "111111",
    scores: [0.8, 0.7, 0.9, 0.75, 0.6, 0.85],
    composite: 0.7667,
    novelty: { level: "low", bits: 0.12 },
    ...overrides,
  };
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}
