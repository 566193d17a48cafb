import { describe, expect, it } from "vitest";

import { queueState } from "../src/queue";
import {
  renderDashboard,
  renderQueue,
  renderRetryBanner,
  renderRuleBreakdown,
} from "../src/render";
import type { MetricsRoundsPayload, QueuePayload } from "../src/types";
import { item } from "./helpers";

function queuePayload(items: QueuePayload["items"]): QueuePayload {
  return {
    round: items.length ? 0 : null,
    round_open: items.length > 0,
    rounds_completed: items.length ? 0 : 2,
    all_rounds_complete: false,
    items,
  };
}

describe("renderQueue", () => {
  it("empty queue renders the round-closed state", () => {
    const html = renderQueue(queueState(queuePayload([])), null);
    expect(html).toContain('data-role="round-closed"');
    expect(html).toContain("Round closed");
  });

  it("lists items with flag styling and verdict buttons", () => {
    const html = renderQueue(
      queueState(
        queuePayload([
          item({ manuscript_id: "m9", novelty: { level: "high", bits: 2.1 } }),
        ]),
      ),
      null,
    );
    expect(html).toContain("flag-high");
    expect(html).toContain('data-verdict="legitimate"');
    expect(html).toContain('data-verdict="fraudulent"');
    expect(html).toContain('data-verdict="below_threshold"');
    expect(html).toContain("m9");
  });

  it("high-flag items come before low-flag items", () => {
    const html = renderQueue(
      queueState(
        queuePayload([
          item({ manuscript_id: "low1", novelty: { level: "low", bits: 0.1 } }),
          item({ manuscript_id: "hot1", novelty: { level: "high", bits: 2.0 } }),
        ]),
      ),
      null,
    );
    expect(html.indexOf("hot1")).toBeLessThan(html.indexOf("low1"));
  });

  it("selected item shows the full rule breakdown", () => {
    const payload = queuePayload([item({ manuscript_id: "m1" })]);
    const collapsed = renderQueue(queueState(payload), null);
    const expanded = renderQueue(queueState(payload), "m1");
    expect(collapsed).not.toContain('data-role="breakdown"');
    expect(expanded).toContain('data-role="breakdown"');
    expect(expanded).toContain("plagiarism");
  });

  it("escapes manuscript ids", () => {
    const html = renderQueue(
      queueState(queuePayload([item({ manuscript_id: "<svg>" })])),
      null,
    );
    expect(html).not.toContain("<svg>");
    expect(html).toContain("&lt;svg&gt;");
  });
});

describe("renderRuleBreakdown", () => {
  it("shows scores and bits verbatim per rule", () => {
    const html = renderRuleBreakdown(
      item({ bits: "101111", scores: [0.9, 0.3, 0.8, 0.7, 0.6, 0.75] }),
    );
    expect(html).toContain("<td>methods</td><td>0.9</td><td>pass</td>");
    expect(html).toContain("<td>reasoning</td><td>0.3</td><td>fail</td>");
    expect(html).toContain("0.7667"); // composite, verbatim
  });
});

describe("renderDashboard", () => {
  const roc = {
    curves: [
      {
        strategy_label: "semi-automated",
        source: "empirical",
        points: [
          [0, 0],
          [1, 1],
        ] as [number, number][],
        auc: 0.9626,
      },
      {
        strategy_label: "traditional-panel",
        source: "empirical",
        points: [
          [0, 0],
          [1, 1],
        ] as [number, number][],
        auc: 0.7626,
      },
    ],
  };

  it("no rounds renders the empty state", () => {
    const metrics: MetricsRoundsPayload = {
      rounds: [],
      calibration_history: [],
      current_x_c: 0,
    };
    expect(renderDashboard(metrics, { curves: [] })).toContain(
      'data-role="no-rounds"',
    );
  });

  it("renders metrics rows verbatim and both curves with a legend", () => {
    const metrics: MetricsRoundsPayload = {
      rounds: [
        {
          round: 0,
          metrics: {
            hit: 0.7877,
            fa: 0.015,
            d_prime: 2.9684,
            criterion_c: 0.6842,
            beta: 7.646,
            edge_corrected: false,
          },
          confusion: { tp: 1, fn: 1, fp: 1, tn: 1 },
          calibration: { x_c: 0, next_x_c: -0.014, accept_cut: 0.7, round: 0 },
        },
      ],
      calibration_history: [[0, 0, 0.015, 0.7877, 7.646]],
      current_x_c: -0.014,
    };
    const html = renderDashboard(metrics, roc);
    expect(html).toContain("<td>7.646</td>"); // beta byte-for-byte
    expect(html).toContain("<td>0.015</td>");
    expect(html).toContain("semi-automated (AUC 0.9626)");
    expect(html).toContain("traditional-panel (AUC 0.7626)");
    expect((html.match(/<polyline/g) ?? []).length).toBeGreaterThanOrEqual(5);
  });
});

describe("renderRetryBanner", () => {
  it("offers a retry action without fabricating data", () => {
    const html = renderRetryBanner("Service unreachable.");
    expect(html).toContain('data-action="retry"');
    expect(html).toContain("Service unreachable.");
  });
});

describe("literal lookups", () => {
  it("prefers payload literals over re-serialized numbers", () => {
    const metrics: MetricsRoundsPayload = {
      rounds: [
        {
          round: 0,
          metrics: {
            hit: 0.9,
            fa: 0.00001,
            d_prime: 2,
            criterion_c: 0.5,
            beta: 1,
            edge_corrected: true,
          },
          confusion: { tp: 1, fn: 1, fp: 1, tn: 1 },
          calibration: { x_c: 0, next_x_c: 0, accept_cut: 0.7, round: 0 },
        },
      ],
      calibration_history: [],
      current_x_c: 0,
    };
    const literals: Record<string, string> = {
      "rounds[0].metrics.fa": "1e-05",
      "rounds[0].metrics.beta": "1.0",
      "rounds[0].calibration.x_c": "0.0",
    };
    const html = renderDashboard(
      metrics,
      { curves: [] },
      (path) => literals[path],
    );
    // the Python-side spellings survive instead of JS's "0.00001", "1", "0"
    expect(html).toContain("<td>1e-05</td>");
    expect(html).toContain("<td>1.0</td>");
    expect(html).toContain("<td>0.0</td>");
  });
});
