/** Thin client over the four service endpoints. No local recomputation:
 * every number shown in the UI is passed through from these payloads. */

import { parseWithLiterals, type RawDocument } from "./rawjson";
import type {
  MetricsRoundsPayload,
  QueuePayload,
  RocPayload,
  Verdict,
  VerdictAck,
} from "./types";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export class ServiceUnreachableError extends Error {
  constructor(cause: unknown) {
    super(`service unreachable: ${String(cause)}`);
  }
}

async function errorDetail(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { error?: string };
    return body.error ?? response.statusText;
  } catch {
    return response.statusText;
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const text = await this.getText(path);
    return JSON.parse(text) as T;
  }

  private async getText(path: string): Promise<string> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path);
    } catch (cause) {
      throw new ServiceUnreachableError(cause);
    }
    if (!response.ok) {
      throw new ApiError(response.status, await errorDetail(response));
    }
    return response.text();
  }

  getQueue(): Promise<QueuePayload> {
    return this.get<QueuePayload>("/api/queue");
  }

  getMetricsRounds(): Promise<MetricsRoundsPayload> {
    return this.get<MetricsRoundsPayload>("/api/metrics/rounds");
  }

  getRoc(): Promise<RocPayload> {
    return this.get<RocPayload>("/api/roc");
  }

  /** Variants that keep each number's source literal for verbatim display. */
  async getMetricsRoundsRaw(): Promise<RawDocument<MetricsRoundsPayload>> {
    return parseWithLiterals(await this.getText("/api/metrics/rounds"));
  }

  async getRocRaw(): Promise<RawDocument<RocPayload>> {
    return parseWithLiterals(await this.getText("/api/roc"));
  }

  async submitVerdict(
    manuscriptId: string,
    verdict: Verdict,
    reviewerId: string,
  ): Promise<VerdictAck> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + "/api/verdicts", {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({
          manuscript_id: manuscriptId,
          verdict,
          reviewer_id: reviewerId,
        }),
      });
    } catch (cause) {
      throw new ServiceUnreachableError(cause);
    }
    if (!response.ok) {
      throw new ApiError(response.status, await errorDetail(response));
    }
    return (await response.json()) as VerdictAck;
  }
}
