import { describe, expect, it } from "vitest";

import { ApiError } from "../src/api";
import {
  queueState,
  removeItem,
  sortQueueItems,
  submitOutcome,
} from "../src/queue";
import type { QueuePayload } from "../src/types";
import { item } from "./helpers";

describe("sortQueueItems", () => {
  it("orders high, moderate, low", () => {
    const items = [
      item({ manuscript_id: "a", novelty: { level: "high", bits: 2 } }),
      item({ manuscript_id: "b", novelty: { level: "low", bits: 0.1 } }),
      item({ manuscript_id: "c", novelty: { level: "moderate", bits: 0.8 } }),
    ];
    const sorted = sortQueueItems(items);
    expect(sorted.map((i) => i.novelty.level)).toEqual(["high", "moderate", "low"]);
  });

  it("puts a single high-flag item first", () => {
    const items = [
      item({ manuscript_id: "a", novelty: { level: "low", bits: 0.1 } }),
      item({ manuscript_id: "b", novelty: { level: "high", bits: 2.5 } }),
    ];
    expect(sortQueueItems(items)[0]!.manuscript_id).toBe("b");
  });

  it("breaks flag ties by id", () => {
    const items = [
      item({ manuscript_id: "m2" }),
      item({ manuscript_id: "m1" }),
    ];
    expect(sortQueueItems(items).map((i) => i.manuscript_id)).toEqual(["m1", "m2"]);
  });

  it("does not mutate its input", () => {
    const items = [
      item({ manuscript_id: "z", novelty: { level: "low", bits: 0 } }),
      item({ manuscript_id: "a", novelty: { level: "high", bits: 2 } }),
    ];
    sortQueueItems(items);
    expect(items[0]!.manuscript_id).toBe("z");
  });
});

describe("queueState", () => {
  const base: QueuePayload = {
    round: 3,
    round_open: true,
    rounds_completed: 3,
    all_rounds_complete: false,
    items: [item()],
  };

  it("open round carries sorted items", () => {
    const state = queueState(base);
    expect(state.kind).toBe("open");
    if (state.kind === "open") {
      expect(state.round).toBe(3);
      expect(state.items).toHaveLength(1);
    }
  });

  it("empty queue is the round-closed state", () => {
    const state = queueState({ ...base, items: [], round_open: false });
    expect(state).toEqual({
      kind: "round-closed",
      roundsCompleted: 3,
      allComplete: false,
    });
  });

  it("reports full completion", () => {
    const state = queueState({
      ...base,
      items: [],
      round: null,
      round_open: false,
      all_rounds_complete: true,
    });
    expect(state.kind).toBe("round-closed");
    if (state.kind === "round-closed") expect(state.allComplete).toBe(true);
  });
});

describe("submitOutcome", () => {
  it("accepted verdict removes the item", () => {
    const outcome = submitOutcome("m1", {
      round_closed: false,
      superseded_previous: false,
    });
    expect(outcome).toEqual({
      kind: "accepted",
      removedId: "m1",
      roundClosed: false,
      superseded: false,
    });
  });

  it("409 maps to the round-closed notice", () => {
    expect(submitOutcome("m1", new ApiError(409, "closed")).kind).toBe(
      "round-closed-notice",
    );
  });

  it("404 requests a refresh for the stale item", () => {
    const outcome = submitOutcome("m1", new ApiError(404, "unknown"));
    expect(outcome).toEqual({ kind: "stale-item", refresh: true });
  });

  it("400 surfaces the service detail", () => {
    const outcome = submitOutcome("m1", new ApiError(400, "bad verdict"));
    expect(outcome).toEqual({ kind: "invalid", detail: "bad verdict" });
  });

  it("supersede flag is passed through from the server", () => {
    const outcome = submitOutcome("m1", {
      round_closed: false,
      superseded_previous: true,
    });
    if (outcome.kind === "accepted") expect(outcome.superseded).toBe(true);
    else throw new Error("expected accepted");
  });
});

describe("removeItem", () => {
  it("drops exactly the submitted manuscript", () => {
    const items = [item({ manuscript_id: "a" }), item({ manuscript_id: "b" })];
    expect(removeItem(items, "a").map((i) => i.manuscript_id)).toEqual(["b"]);
  });
});
