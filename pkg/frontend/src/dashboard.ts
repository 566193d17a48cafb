/** Dashboard data shaping: trend series and SVG geometry.
 *
 * Numbers are taken verbatim from the service payloads; this module only
 * arranges them for display (no d', beta, novelty, or confusion math). */

import type { MetricsRoundsPayload, RocCurvePayload } from "./types";

export interface TrendPoint {
  round: number;
  value: number;
}

export interface TrendSeries {
  label: string;
  points: TrendPoint[];
}

/** Per-round x_c / beta / observed-fa series from the metrics payload. */
export function trendSeries(payload: MetricsRoundsPayload): TrendSeries[] {
  const xc: TrendPoint[] = [];
  const beta: TrendPoint[] = [];
  const fa: TrendPoint[] = [];
  for (const entry of payload.rounds) {
    xc.push({ round: entry.round, value: entry.calibration.x_c });
    if (entry.metrics !== null) {
      beta.push({ round: entry.round, value: entry.metrics.beta });
      fa.push({ round: entry.round, value: entry.metrics.fa });
    }
  }
  return [
    { label: "x_c", points: xc },
    { label: "beta", points: beta },
    { label: "observed fa", points: fa },
  ];
}

export function hasRounds(payload: MetricsRoundsPayload): boolean {
  return payload.rounds.length > 0;
}

/** Scale points into an SVG polyline string for a width x height viewport. */
export function polyline(
  points: [number, number][],
  width: number,
  height: number,
  xDomain: [number, number],
  yDomain: [number, number],
): string {
  const [x0, x1] = xDomain;
  const [y0, y1] = yDomain;
  const spanX = x1 - x0 || 1;
  const spanY = y1 - y0 || 1;
  return points
    .map(([x, y]) => {
      const px = ((x - x0) / spanX) * width;
      const py = height - ((y - y0) / spanY) * height;
      return `${round2(px)},${round2(py)}`;
    })
    .join(" ");
}

function round2(v: number): number {
  return Math.round(v * 100) / 100;
}

export function trendPolyline(
  series: TrendSeries,
  width: number,
  height: number,
): string {
  if (series.points.length === 0) return "";
  const rounds = series.points.map((p) => p.round);
  const values = series.points.map((p) => p.value);
  const pts: [number, number][] = series.points.map((p) => [p.round, p.value]);
  return polyline(
    pts,
    width,
    height,
    [Math.min(...rounds), Math.max(...rounds)],
    [Math.min(...values), Math.max(...values)],
  );
}

/** ROC curves map straight onto the unit square. */
export function rocPolyline(
  curve: RocCurvePayload,
  width: number,
  height: number,
): string {
  return polyline(curve.points, width, height, [0, 1], [0, 1]);
}

/** Display a payload number exactly as JSON serialized it (no rounding). */
export function verbatim(value: number): string {
  return JSON.stringify(value);
}
