/** Chart geometry, computed from API chart payloads only.
 *
 * Three presentations plus an overlay mode:
 *  - line graph of allele and genotype frequencies;
 *  - stacked columns with the numbers printed inside each segment;
 *  - nested columns, one panel per genotype class, where the generation-0
 *    bar is the narrowest and the latest the widest and the numbers appear
 *    only in the hover payload.
 */

import type { ChartPayload } from "./types.js";

export const GENOTYPE_COLORS: Record<string, string> = {
  AA: "#4e79a7",
  Aa: "#f28e2b",
  aa: "#59a14f",
};

export const ALLELE_COLORS: Record<string, string> = {
  p: "#111111",
  q: "#b07aa1",
};

export interface RectShape {
  x: number;
  y: number;
  width: number;
  height: number;
  fill: string;
  /** Tooltip text; shown only on hover. */
  hover: string;
}

export interface TextShape {
  x: number;
  y: number;
  text: string;
}

export interface LineShape {
  name: string;
  color: string;
  dashed: boolean;
  /** SVG polyline points attribute. */
  points: string;
}

export interface ChartSize {
  width: number;
  height: number;
  padding: number;
}

export const DEFAULT_SIZE: ChartSize = { width: 640, height: 320, padding: 36 };

function xScale(index: number, count: number, size: ChartSize): number {
  const inner = size.width - 2 * size.padding;
  if (count === 1) {
    return size.padding + inner / 2;
  }
  return size.padding + (inner * index) / (count - 1);
}

function yScale(value: number, size: ChartSize): number {
  const inner = size.height - 2 * size.padding;
  return size.height - size.padding - inner * value;
}

export function buildLineGraph(chart: ChartPayload, size: ChartSize = DEFAULT_SIZE): LineShape[] {
  const count = chart.generations.length;
  const toPoints = (values: number[]): string =>
    values.map((v, i) => `${xScale(i, count, size)},${yScale(v, size)}`).join(" ");
  const lines: LineShape[] = [
    { name: "p", color: ALLELE_COLORS["p"]!, dashed: false, points: toPoints(chart.p) },
    { name: "q", color: ALLELE_COLORS["q"]!, dashed: false, points: toPoints(chart.q) },
  ];
  for (const genotype of ["AA", "Aa", "aa"] as const) {
    lines.push({
      name: `f${genotype}`,
      color: GENOTYPE_COLORS[genotype]!,
      dashed: true,
      points: toPoints(chart.genotype_series[genotype]),
    });
  }
  return lines;
}

export interface StackedGeometry {
  rects: RectShape[];
  /** In-segment numeric labels; always visible. */
  labels: TextShape[];
  axis: TextShape[];
}

export function buildStacked(chart: ChartPayload, size: ChartSize = DEFAULT_SIZE): StackedGeometry {
  const count = chart.columns.length;
  const inner = size.width - 2 * size.padding;
  const slot = inner / Math.max(count, 1);
  const barWidth = slot * 0.6;
  const rects: RectShape[] = [];
  const labels: TextShape[] = [];
  const axis: TextShape[] = [];
  chart.columns.forEach((column, i) => {
    const x = size.padding + slot * i + (slot - barWidth) / 2;
    let top = 0;
    for (const segment of column.segments) {
      const y0 = yScale(top + segment.value, size);
      const y1 = yScale(top, size);
      rects.push({
        x,
        y: y0,
        width: barWidth,
        height: y1 - y0,
        fill: GENOTYPE_COLORS[segment.genotype] ?? "#888888",
        hover: `generation ${column.t}: ${segment.genotype} = ${segment.label}`,
      });
      if (segment.value > 0) {
        labels.push({ x: x + barWidth / 2, y: (y0 + y1) / 2, text: segment.label });
      }
      top += segment.value;
    }
    axis.push({ x: x + barWidth / 2, y: size.height - size.padding + 16, text: String(column.t) });
  });
  return { rects, labels, axis };
}

export interface NestedPanelGeometry {
  genotype: string;
  /** Narrowest bar first (generation 0); numbers live in hover only. */
  bars: RectShape[];
  caption: TextShape;
}

export function buildNested(
  chart: ChartPayload,
  size: ChartSize = DEFAULT_SIZE,
): NestedPanelGeometry[] {
  const panels = chart.panels;
  const slot = (size.width - 2 * size.padding) / Math.max(panels.length, 1);
  const maxBar = slot * 0.7;
  return panels.map((panel, i) => {
    const center = size.padding + slot * i + slot / 2;
    // Widest (latest) bars first so narrower, earlier bars draw on top.
    const ordered = [...panel.columns].sort((a, b) => b.width - a.width);
    const bars: RectShape[] = ordered.map((column) => {
      const width = maxBar * column.width;
      return {
        x: center - width / 2,
        y: yScale(column.value, size),
        width,
        height: yScale(0, size) - yScale(column.value, size),
        fill: GENOTYPE_COLORS[panel.genotype] ?? "#888888",
        hover: column.hover,
      };
    });
    return {
      genotype: panel.genotype,
      bars,
      caption: { x: center, y: size.height - size.padding + 16, text: panel.genotype },
    };
  });
}

/** Overlay mode: allele-frequency lines drawn on top of the stacked columns
 * ("graphs and diagrams that overlap"). */
export interface OverlayGeometry {
  stacked: StackedGeometry;
  lines: LineShape[];
}

export function buildOverlay(chart: ChartPayload, size: ChartSize = DEFAULT_SIZE): OverlayGeometry {
  const count = chart.generations.length;
  const inner = size.width - 2 * size.padding;
  const slot = inner / Math.max(count, 1);
  const toPoints = (values: number[]): string =>
    values
      .map((v, i) => `${size.padding + slot * i + slot / 2},${yScale(v, size)}`)
      .join(" ");
  return {
    stacked: buildStacked(chart, size),
    lines: [
      { name: "p", color: ALLELE_COLORS["p"]!, dashed: false, points: toPoints(chart.p) },
      { name: "q", color: ALLELE_COLORS["q"]!, dashed: false, points: toPoints(chart.q) },
    ],
  };
}
