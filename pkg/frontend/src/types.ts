/** Payload shapes, verbatim from the review service. */

export type FlagLevel = "low" | "moderate" | "high";

export type Verdict = "legitimate" | "fraudulent" | "below_threshold";

export interface NoveltyPayload {
  level: FlagLevel;
  bits: number;
}

export interface QueueItem {
  manuscript_id: string;
  round: number;
  triage: string;
  action: string;
  bits: string;
  scores: number[];
  composite: number;
  novelty: NoveltyPayload;
}

export interface QueuePayload {
  round: number | null;
  round_open: boolean;
  rounds_completed: number;
  all_rounds_complete: boolean;
  items: QueueItem[];
}

export interface VerdictAck {
  status: string;
  round: number;
  superseded_previous: boolean;
  round_closed: boolean;
}

export interface MetricsPayload {
  hit: number;
  fa: number;
  d_prime: number;
  criterion_c: number;
  beta: number;
  edge_corrected: boolean;
}

export interface RoundEntry {
  round: number;
  metrics: MetricsPayload | null;
  confusion: { tp: number; fn: number; fp: number; tn: number };
  calibration: { x_c: number; next_x_c: number; accept_cut: number; round: number };
}

export interface MetricsRoundsPayload {
  rounds: RoundEntry[];
  calibration_history: [number, number, number, number, number][];
  current_x_c: number;
}

export interface RocCurvePayload {
  strategy_label: string;
  source: string;
  points: [number, number][];
  auc: number;
}

export interface RocPayload {
  curves: RocCurvePayload[];
}
