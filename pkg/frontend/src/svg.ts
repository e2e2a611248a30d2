// Minimal SVG string assembly: fixed fonts and sizes, no timestamps, so the
// same inputs always produce byte-identical files.

export interface Margin {
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export const FONT = 'font-family="monospace" font-size="11"';

export function esc(s: string): string {
  return s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function fmt(x: number): string {
  // fixed two-decimal pixel positions keep files small and deterministic
  return (Math.round(x * 100) / 100).toString();
}

/** Affine map from a data interval onto a pixel interval. */
export function scale(d0: number, d1: number, p0: number, p1: number): (x: number) => number {
  const k = (p1 - p0) / (d1 - d0);
  return (x: number) => p0 + (x - d0) * k;
}

export function open(width: number, height: number): string[] {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">`,
    `<rect x="0" y="0" width="${width}" height="${height}" fill="white"/>`,
  ];
}

export function close(parts: string[]): string {
  parts.push('</svg>');
  return parts.join('\n') + '\n';
}

export function text(x: number, y: number, s: string, anchor = 'middle'): string {
  return `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" ${FONT}>${esc(s)}</text>`;
}

export function frame(m: Margin, w: number, h: number): string {
  return `<rect x="${m.left}" y="${m.top}" width="${w}" height="${h}" ` +
    'fill="none" stroke="black" stroke-width="1"/>';
}

/** A handful of evenly spaced axis ticks with labels. */
export function ticks(
  lo: number, hi: number, s: (x: number) => number, count: number,
  place: (px: number, label: string) => string,
): string[] {
  const out: string[] = [];
  for (let i = 0; i <= count; i++) {
    const v = lo + ((hi - lo) * i) / count;
    out.push(place(s(v), trimNumber(v)));
  }
  return out;
}

export function trimNumber(v: number): string {
  const r = Math.abs(v) < 1e-12 ? 0 : v;
  return Number(r.toPrecision(6)).toString();
}

export const PALETTE = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b'];
