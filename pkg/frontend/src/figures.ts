// Figure rendering: profiles, error bars, and hyperbolicity regions from the
// CSV files the swmoments CLI writes. Output is a deterministic SVG string;
// the analytic region boundary is recomputed here, independently of the
// raster, so a units or schema drift between producer and consumer shows up
// as a visible mismatch.

import * as fs from 'node:fs';
import * as path from 'node:path';

import { Table, numbers, readCsv, requireColumns, column } from './csv';
import { FONT, Margin, PALETTE, close, esc, fmt, frame, open, scale, text, ticks, trimNumber } from './svg';

export type FigureKind = 'profiles' | 'errorbars' | 'region';

export interface FigureSpec {
  kind: FigureKind;
  /** input CSV paths; profiles expect `*_<model>_N<order>_snapshot.csv` names */
  inputs: string[];
  /** column to plot (profiles only), e.g. "h" or "alpha_1" */
  variable?: string;
  /** output image path (.svg) */
  output: string;
  width?: number;
  height?: number;
  /** draw the closed-form region boundary over the raster (region only) */
  overlay?: boolean;
}

/** Render the figure, write it to spec.output, and return the SVG text. */
export function render(spec: FigureSpec): string {
  if (spec.inputs.length === 0) {
    throw new Error('empty selection: no input CSVs given');
  }
  let svg: string;
  switch (spec.kind) {
    case 'region':
      svg = renderRegion(spec);
      break;
    case 'profiles':
      svg = renderProfiles(spec);
      break;
    case 'errorbars':
      svg = renderErrorBars(spec);
      break;
    default:
      throw new Error(`unknown figure kind '${(spec as FigureSpec).kind}'`);
  }
  fs.mkdirSync(path.dirname(path.resolve(spec.output)), { recursive: true });
  fs.writeFileSync(spec.output, svg);
  return svg;
}

// ---------------------------------------------------------------------------
// hyperbolicity region raster + analytic boundary overlay
// ---------------------------------------------------------------------------

/**
 * Scaled-coordinate boundary of the locally hyperbolic model at second
 * moment order: the outer wave pair turns complex where
 * a2^2 = 5 (1 + a1^2). Recomputed here on purpose (visual cross-check).
 */
export function regionBoundary(a1: number): number {
  return Math.sqrt(5 * (1 + a1 * a1));
}

const REGION_FILL: Record<number, string> = {
  0: '#ffffff',
  1: '#7fb3d5',
  2: '#d5e8f5',
};

function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

function renderRegion(spec: FigureSpec): string {
  if (spec.inputs.length !== 1) {
    throw new Error('region figures take exactly one raster CSV');
  }
  const table = readCsv(spec.inputs[0]);
  requireColumns(table, ['a_1', 'a_2', 'hyperbolic'], 'region raster');
  const a1 = numbers(table, 'a_1');
  const a2 = numbers(table, 'a_2');
  const verdict = numbers(table, 'hyperbolic');
  const xs = uniqueSorted(a1);
  const ys = uniqueSorted(a2);
  const width = spec.width ?? 640;
  const height = spec.height ?? 640;
  const m: Margin = { left: 52, right: 24, top: 28, bottom: 44 };
  const innerW = width - m.left - m.right;
  const innerH = height - m.top - m.bottom;
  const cellW = innerW / xs.length;
  const cellH = innerH / ys.length;
  const xIndex = new Map(xs.map((v, i) => [v, i]));
  const yIndex = new Map(ys.map((v, i) => [v, i]));
  const xCenter = (v: number) => m.left + (xIndex.get(v)! + 0.5) * cellW;
  const yCenter = (v: number) => m.top + innerH - (yIndex.get(v)! + 0.5) * cellH;

  const parts = open(width, height);
  parts.push(`<g class="raster">`);
  for (let r = 0; r < a1.length; r++) {
    const v = verdict[r];
    if (v === 0) continue; // white background stands in for non-hyperbolic
    const cx = xCenter(a1[r]);
    const cy = yCenter(a2[r]);
    parts.push(
      `<rect class="cell" x="${fmt(cx - cellW / 2)}" y="${fmt(cy - cellH / 2)}" ` +
      `width="${fmt(cellW)}" height="${fmt(cellH)}" fill="${REGION_FILL[v] ?? '#cccccc'}" ` +
      `data-a1="${a1[r]}" data-a2="${a2[r]}" data-v="${v}"/>`
    );
  }
  parts.push('</g>');

  if (spec.overlay !== false) {
    for (const sign of [1, -1]) {
      const pts: string[] = [];
      for (const x of xs) {
        const b = sign * regionBoundary(x);
        if (b >= ys[0] - 1e-12 && b <= ys[ys.length - 1] + 1e-12) {
          // same cell-center geometry as the raster: data value -> grid index
          const yCell = m.top + innerH
            - (((b - ys[0]) / (ys[1] - ys[0]) + 0.5) * cellH);
          pts.push(`${fmt(xCenter(x))},${fmt(yCell)}`);
        }
      }
      if (pts.length > 1) {
        parts.push(
          `<polyline class="overlay" points="${pts.join(' ')}" ` +
          'fill="none" stroke="#d62728" stroke-width="1.5"/>'
        );
      }
    }
  }

  parts.push(frame(m, innerW, innerH));
  const sx = scale(xs[0], xs[xs.length - 1], m.left + cellW / 2, m.left + innerW - cellW / 2);
  const sy = scale(ys[0], ys[ys.length - 1], m.top + innerH - cellH / 2, m.top + cellH / 2);
  parts.push(...ticks(xs[0], xs[xs.length - 1], sx, 4,
    (px, label) => text(px, height - m.bottom + 16, label)));
  parts.push(...ticks(ys[0], ys[ys.length - 1], sy, 4,
    (px, label) => text(m.left - 8, px + 4, label, 'end')));
  parts.push(text(m.left + innerW / 2, height - 10, 'a_1'));
  parts.push(text(14, m.top + innerH / 2, 'a_2'));
  parts.push(text(m.left + innerW / 2, 18, `hyperbolicity region (${path.basename(table.path)})`));
  return close(parts);
}

// ---------------------------------------------------------------------------
// solution profiles: one panel per model, one curve per moment order
// ---------------------------------------------------------------------------

interface Snapshot {
  model: string;
  order: number;
  table: Table;
}

function parseSnapshotName(p: string): { model: string; order: number } {
  const match = /_([a-z]+)_N(\d+)_snapshot\.csv$/.exec(path.basename(p));
  if (!match) {
    throw new Error(
      `cannot infer model/order from '${p}'; expected *_<model>_N<k>_snapshot.csv`
    );
  }
  return { model: match[1], order: Number(match[2]) };
}

function renderProfiles(spec: FigureSpec): string {
  const variable = spec.variable;
  if (!variable) {
    throw new Error('profiles need a variable to plot (e.g. "h")');
  }
  const snaps: Snapshot[] = spec.inputs.map((p) => {
    const table = readCsv(p);
    requireColumns(table, ['x', 'h', 'u_m'], 'snapshot');
    return { ...parseSnapshotName(p), table };
  });
  const usable = snaps.filter((s) => s.table.header.includes(variable));
  if (usable.length === 0) {
    throw new Error(`empty selection: no input provides column '${variable}'`);
  }

  const models = [...new Set(usable.map((s) => s.model))];
  const cols = Math.min(models.length, 2);
  const rows = Math.ceil(models.length / cols);
  const panelW = spec.width ?? 420;
  const panelH = spec.height ?? 300;
  const width = cols * panelW;
  const height = rows * panelH;
  const m: Margin = { left: 56, right: 16, top: 30, bottom: 40 };

  let lo = Infinity, hi = -Infinity, xlo = Infinity, xhi = -Infinity;
  for (const s of usable) {
    for (const v of numbers(s.table, variable)) {
      lo = Math.min(lo, v); hi = Math.max(hi, v);
    }
    for (const v of numbers(s.table, 'x')) {
      xlo = Math.min(xlo, v); xhi = Math.max(xhi, v);
    }
  }
  if (hi === lo) { hi = lo + 1; }
  const pad = 0.05 * (hi - lo);
  lo -= pad; hi += pad;

  const parts = open(width, height);
  models.forEach((model, k) => {
    const px0 = (k % cols) * panelW;
    const py0 = Math.floor(k / cols) * panelH;
    const innerW = panelW - m.left - m.right;
    const innerH = panelH - m.top - m.bottom;
    const sx = scale(xlo, xhi, px0 + m.left, px0 + m.left + innerW);
    const sy = scale(lo, hi, py0 + m.top + innerH, py0 + m.top);
    parts.push(`<g class="panel" data-model="${esc(model)}">`);
    parts.push(`<rect x="${px0 + m.left}" y="${py0 + m.top}" width="${innerW}" ` +
      `height="${innerH}" fill="none" stroke="black"/>`);
    parts.push(text(px0 + m.left + innerW / 2, py0 + 18, `${model}: ${variable}`));
    const orders = usable.filter((s) => s.model === model).sort((a, b) => a.order - b.order);
    for (const s of orders) {
      const xv = numbers(s.table, 'x');
      const qv = numbers(s.table, variable);
      const pts = xv.map((x, i) => `${fmt(sx(x))},${fmt(sy(qv[i]))}`).join(' ');
      const color = PALETTE[(s.order - 1) % PALETTE.length];
      parts.push(
        `<polyline class="curve" data-model="${esc(model)}" data-n="${s.order}" ` +
        `points="${pts}" fill="none" stroke="${color}" stroke-width="1.2"/>`
      );
      parts.push(
        `<text x="${px0 + m.left + innerW - 6}" y="${py0 + m.top + 14 * s.order}" ` +
        `text-anchor="end" ${FONT} fill="${color}">N=${s.order}</text>`
      );
    }
    parts.push(...ticks(xlo, xhi, sx, 4, (px, lab) => text(px, py0 + panelH - 22, lab)));
    parts.push(...ticks(lo, hi, sy, 4, (px, lab) => text(px0 + m.left - 6, px + 4, lab, 'end')));
    parts.push('</g>');
  });
  return close(parts);
}

// ---------------------------------------------------------------------------
// error bars: one panel per variable, one bar per (model, order)
// ---------------------------------------------------------------------------

function renderErrorBars(spec: FigureSpec): string {
  if (spec.inputs.length !== 1) {
    throw new Error('errorbars figures take exactly one error-table CSV');
  }
  const table = readCsv(spec.inputs[0]);
  requireColumns(table, ['model', 'N', 'variable', 'rel_error', 'status'], 'error table');
  const models = column(table, 'model');
  const orders = column(table, 'N');
  const variables = column(table, 'variable');
  const errors = column(table, 'rel_error');
  const status = column(table, 'status');

  const panelVars = [...new Set(variables)];
  const entries = panelVars.map((v) => {
    const idx = variables.map((vv, i) => i).filter(
      (i) => variables[i] === v && status[i] === 'ok' && errors[i] !== ''
    );
    return { variable: v, idx };
  }).filter((e) => e.idx.length > 0);
  if (entries.length === 0) {
    throw new Error('empty selection: error table has no usable rows');
  }

  const panelW = spec.width ?? 480;
  const panelH = spec.height ?? 260;
  const cols = Math.min(entries.length, 2);
  const rows = Math.ceil(entries.length / cols);
  const width = cols * panelW;
  const height = rows * panelH;
  const m: Margin = { left: 60, right: 14, top: 30, bottom: 56 };
  const floor = 1e-16;

  const parts = open(width, height);
  entries.forEach((entry, k) => {
    const px0 = (k % cols) * panelW;
    const py0 = Math.floor(k / cols) * panelH;
    const innerW = panelW - m.left - m.right;
    const innerH = panelH - m.top - m.bottom;
    const vals = entry.idx.map((i) => Math.max(Number(errors[i]), floor));
    const logLo = Math.floor(Math.log10(Math.min(...vals)));
    const logHi = Math.ceil(Math.log10(Math.max(...vals) * 1.0000001));
    const sy = scale(logLo, Math.max(logHi, logLo + 1), py0 + m.top + innerH, py0 + m.top);
    const barW = innerW / entry.idx.length;
    parts.push(`<g class="panel" data-variable="${esc(entry.variable)}">`);
    parts.push(`<rect x="${px0 + m.left}" y="${py0 + m.top}" width="${innerW}" ` +
      `height="${innerH}" fill="none" stroke="black"/>`);
    parts.push(text(px0 + m.left + innerW / 2, py0 + 18,
      `relative error: ${entry.variable} (log10 scale)`));
    entry.idx.forEach((row, j) => {
      const e = Math.max(Number(errors[row]), floor);
      const x = px0 + m.left + j * barW;
      const yTop = sy(Math.log10(e));
      const yBase = py0 + m.top + innerH;
      const color = PALETTE[(Number(orders[row]) - 1) % PALETTE.length];
      parts.push(
        `<rect class="bar" x="${fmt(x + 0.15 * barW)}" y="${fmt(yTop)}" ` +
        `width="${fmt(0.7 * barW)}" height="${fmt(Math.max(yBase - yTop, 0.5))}" ` +
        `fill="${color}" data-model="${esc(models[row])}" data-n="${orders[row]}" ` +
        `data-variable="${esc(entry.variable)}" data-error="${errors[row]}"/>`
      );
      parts.push(
        `<text x="${fmt(x + barW / 2)}" y="${yBase + 12}" text-anchor="end" ${FONT} ` +
        `transform="rotate(-45 ${fmt(x + barW / 2)} ${yBase + 12})">` +
        `${esc(models[row])}${orders[row]}</text>`
      );
    });
    for (let d = logLo; d <= Math.max(logHi, logLo + 1); d++) {
      parts.push(text(px0 + m.left - 6, sy(d) + 4, `1e${trimNumber(d)}`, 'end'));
    }
    parts.push('</g>');
  });
  return close(parts);
}
