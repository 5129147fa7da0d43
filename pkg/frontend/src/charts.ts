/**
 * SVG chart construction as pure string/data functions (no DOM needed),
 * so chart geometry is unit-testable and rendering is a trivial innerHTML.
 *
 * Both charts use a log10 volume axis: the decision range spans 1K to
 * 200M inferences, unreadable on a linear scale.
 */

import type { BreakEven, CurveRow } from "./types";

export interface ChartGeometry {
  width: number;
  height: number;
  marginLeft: number;
  marginBottom: number;
  marginTop: number;
  marginRight: number;
}

export const DEFAULT_GEOMETRY: ChartGeometry = {
  width: 560,
  height: 300,
  marginLeft: 64,
  marginBottom: 36,
  marginTop: 12,
  marginRight: 16,
};

export interface Scale {
  (value: number): number;
  min: number;
  max: number;
}

export function logScale(min: number, max: number, rangeLo: number, rangeHi: number): Scale {
  const lo = Math.log10(min);
  const hi = Math.log10(max);
  const scale = ((value: number) =>
    rangeLo + ((Math.log10(value) - lo) / (hi - lo)) * (rangeHi - rangeLo)) as Scale;
  scale.min = min;
  scale.max = max;
  return scale;
}

export function linearScale(min: number, max: number, rangeLo: number, rangeHi: number): Scale {
  const scale = ((value: number) =>
    rangeLo + ((value - min) / (max - min || 1)) * (rangeHi - rangeLo)) as Scale;
  scale.min = min;
  scale.max = max;
  return scale;
}

export interface SeriesPath {
  model: string;
  path: string; // SVG path data
  color: string;
}

const PALETTE = ["#2563eb", "#059669", "#dc2626", "#9333ea", "#ea580c"];

export function colorFor(index: number): string {
  return PALETTE[index % PALETTE.length] ?? "#000";
}

/** Group curve rows by model, preserving first-seen model order. */
export function groupByModel(rows: CurveRow[]): Map<string, CurveRow[]> {
  const groups = new Map<string, CurveRow[]>();
  for (const row of rows) {
    const bucket = groups.get(row.model);
    if (bucket) bucket.push(row);
    else groups.set(row.model, [row]);
  }
  return groups;
}

export function seriesPaths(
  rows: CurveRow[],
  value: (row: CurveRow) => number,
  x: Scale,
  y: Scale,
): SeriesPath[] {
  const paths: SeriesPath[] = [];
  let index = 0;
  for (const [model, points] of groupByModel(rows)) {
    const d = points
      .map((p, i) => `${i === 0 ? "M" : "L"}${x(p.volume).toFixed(2)},${y(value(p)).toFixed(2)}`)
      .join(" ");
    paths.push({ model, path: d, color: colorFor(index) });
    index += 1;
  }
  return paths;
}

export interface BreakEvenMarker {
  x: number;
  volume: number;
  label: string;
  visible: boolean;
}

/**
 * Vertical marker at the service-reported break-even volume; hidden (with
 * the reason as its label) when the service reports no finite break-even
 * or the volume falls outside the charted range.
 */
export function breakEvenMarker(breakeven: BreakEven | null, x: Scale): BreakEvenMarker {
  if (breakeven === null) {
    return { x: NaN, volume: NaN, label: "no finite break-even", visible: false };
  }
  const visible = breakeven.volume >= x.min && breakeven.volume <= x.max;
  return {
    x: visible ? x(breakeven.volume) : NaN,
    volume: breakeven.volume,
    label: `break-even ${formatVolume(breakeven.volume)}`,
    visible,
  };
}

export function formatVolume(volume: number): string {
  if (volume >= 1e6) return `${(volume / 1e6).toFixed(1)}M`;
  if (volume >= 1e3) return `${(volume / 1e3).toFixed(0)}K`;
  return volume.toFixed(0);
}

export function formatUsd(amount: number): string {
  if (amount >= 1000) {
    return `$${amount.toLocaleString("en-US", { maximumFractionDigits: 0 })}`;
  }
  if (amount >= 1) return `$${amount.toFixed(2)}`;
  return `$${amount.toPrecision(3)}`;
}

export interface ChartSvg {
  svg: string;
  legend: { model: string; color: string }[];
}

/** Assemble one complete SVG chart: series, axes ticks, break-even marker. */
export function renderChart(
  rows: CurveRow[],
  value: (row: CurveRow) => number,
  breakeven: BreakEven | null,
  title: string,
  geometry: ChartGeometry = DEFAULT_GEOMETRY,
  logY = true,
): ChartSvg {
  const { width, height, marginLeft, marginRight, marginTop, marginBottom } = geometry;
  const volumes = rows.map((r) => r.volume);
  const values = rows.map(value).filter((v) => v > 0 || !logY);
  const x = logScale(Math.min(...volumes), Math.max(...volumes), marginLeft, width - marginRight);
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const y = logY
    ? logScale(lo, hi, height - marginBottom, marginTop)
    : linearScale(lo, hi, height - marginBottom, marginTop);

  const paths = seriesPaths(rows, value, x, y);
  const marker = breakEvenMarker(breakeven, x);

  const parts: string[] = [
    `<svg viewBox="0 0 ${width} ${height}" role="img" aria-label="${title}">`,
    `<rect x="0" y="0" width="${width}" height="${height}" fill="#fff"/>`,
  ];
  for (let decade = Math.ceil(Math.log10(x.min)); decade <= Math.floor(Math.log10(x.max)); decade++) {
    const volume = 10 ** decade;
    const px = x(volume).toFixed(2);
    parts.push(
      `<line x1="${px}" y1="${marginTop}" x2="${px}" y2="${height - marginBottom}" stroke="#e5e7eb"/>`,
      `<text x="${px}" y="${height - marginBottom + 16}" font-size="10" text-anchor="middle" fill="#6b7280">${formatVolume(volume)}</text>`,
    );
  }
  for (const series of paths) {
    parts.push(
      `<path d="${series.path}" fill="none" stroke="${series.color}" stroke-width="2" data-model="${series.model}"/>`,
    );
  }
  if (marker.visible) {
    const px = marker.x.toFixed(2);
    parts.push(
      `<line x1="${px}" y1="${marginTop}" x2="${px}" y2="${height - marginBottom}" stroke="#111827" stroke-dasharray="5,4" data-role="breakeven-marker" data-volume="${marker.volume}"/>`,
      `<text x="${px}" y="${marginTop + 10}" font-size="10" text-anchor="middle" fill="#111827">${marker.label}</text>`,
    );
  }
  parts.push("</svg>");
  return { svg: parts.join("\n"), legend: paths.map((p) => ({ model: p.model, color: p.color })) };
}
