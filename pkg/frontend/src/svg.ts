/** Minimal deterministic SVG figure builder (no DOM, no timestamps). */

export const WIDTH = 960;
export const HEIGHT = 540;
export const MARGIN = { top: 48, right: 32, bottom: 56, left: 84 };

export const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
  "#ff7f0e", "#8c564b", "#e377c2", "#17becf", "#7f7f7f",
];

export type Scale = (v: number) => number;

export interface Axis {
  scale: Scale;
  ticks: number[];
  log: boolean;
}

function niceTicks(lo: number, hi: number, count = 6): number[] {
  if (!(hi > lo)) {
    const pad = Math.abs(lo) > 0 ? Math.abs(lo) * 0.5 : 1;
    return [lo - pad, lo, lo + pad];
  }
  const span = hi - lo;
  const step0 = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = span / (count * step0);
  const step = step0 * (err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1);
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= hi + 1e-12 * span; v += step) {
    ticks.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  }
  return ticks;
}

export function linearAxis(lo: number, hi: number, pxLo: number, pxHi: number): Axis {
  if (!(hi > lo)) {
    const pad = Math.abs(lo) > 0 ? Math.abs(lo) * 0.5 : 1;
    lo -= pad;
    hi += pad;
  }
  const scale = (v: number) => pxLo + ((v - lo) / (hi - lo)) * (pxHi - pxLo);
  return { scale, ticks: niceTicks(lo, hi), log: false };
}

export function logAxis(lo: number, hi: number, pxLo: number, pxHi: number): Axis {
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  const span = lhi > llo ? lhi - llo : 1;
  const scale = (v: number) => pxLo + ((Math.log10(v) - llo) / span) * (pxHi - pxLo);
  const ticks: number[] = [];
  for (let e = Math.ceil(llo); e <= Math.floor(lhi); e++) {
    ticks.push(Math.pow(10, e));
  }
  if (ticks.length === 0) {
    ticks.push(lo, hi);
  }
  return { scale, ticks, log: true };
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1).replace("e+", "e");
  return String(Math.round(v * 1e6) / 1e6);
}

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export class Figure {
  private parts: string[] = [];

  constructor(title: string, xlabel: string, ylabel: string) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
        `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
      `<text x="${WIDTH / 2}" y="28" text-anchor="middle" font-size="18">${esc(title)}</text>`,
      `<text x="${(MARGIN.left + WIDTH - MARGIN.right) / 2}" y="${HEIGHT - 12}" ` +
        `text-anchor="middle" font-size="14">${esc(xlabel)}</text>`,
      `<text x="20" y="${(MARGIN.top + HEIGHT - MARGIN.bottom) / 2}" text-anchor="middle" ` +
        `font-size="14" transform="rotate(-90 20 ${(MARGIN.top + HEIGHT - MARGIN.bottom) / 2})">` +
        `${esc(ylabel)}</text>`,
    );
  }

  axes(x: Axis, y: Axis): void {
    const x0 = MARGIN.left;
    const x1 = WIDTH - MARGIN.right;
    const y0 = HEIGHT - MARGIN.bottom;
    const y1 = MARGIN.top;
    this.parts.push(
      `<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="black"/>`,
      `<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="black"/>`,
    );
    for (const t of x.ticks) {
      const px = x.scale(t);
      if (px < x0 - 0.5 || px > x1 + 0.5) continue;
      this.parts.push(
        `<line x1="${px.toFixed(2)}" y1="${y0}" x2="${px.toFixed(2)}" y2="${y0 + 6}" stroke="black"/>`,
        `<text x="${px.toFixed(2)}" y="${y0 + 20}" text-anchor="middle" font-size="12">${fmt(t)}</text>`,
      );
    }
    for (const t of y.ticks) {
      const py = y.scale(t);
      if (py < y1 - 0.5 || py > y0 + 0.5) continue;
      this.parts.push(
        `<line x1="${x0 - 6}" y1="${py.toFixed(2)}" x2="${x0}" y2="${py.toFixed(2)}" stroke="black"/>`,
        `<text x="${x0 - 10}" y="${(py + 4).toFixed(2)}" text-anchor="end" font-size="12">${fmt(t)}</text>`,
        `<line x1="${x0}" y1="${py.toFixed(2)}" x2="${x1}" y2="${py.toFixed(2)}" stroke="#dddddd" stroke-width="0.5"/>`,
      );
    }
  }

  polyline(points: [number, number][], color: string): void {
    if (points.length === 0) return;
    const attr = points.map(([px, py]) => `${px.toFixed(2)},${py.toFixed(2)}`).join(" ");
    this.parts.push(
      `<polyline points="${attr}" fill="none" stroke="${color}" stroke-width="1.8"/>`,
    );
  }

  circle(px: number, py: number, color: string, r = 5): void {
    this.parts.push(
      `<circle cx="${px.toFixed(2)}" cy="${py.toFixed(2)}" r="${r}" fill="${color}"/>`,
    );
  }

  triangle(px: number, py: number, color: string, r = 6): void {
    const pts = [
      [px, py - r],
      [px - r, py + r],
      [px + r, py + r],
    ]
      .map(([a, b]) => `${a.toFixed(2)},${b.toFixed(2)}`)
      .join(" ");
    this.parts.push(`<polygon points="${pts}" fill="${color}"/>`);
  }

  dashedHLine(py: number, label: string): void {
    const x0 = MARGIN.left;
    const x1 = WIDTH - MARGIN.right;
    this.parts.push(
      `<line x1="${x0}" y1="${py.toFixed(2)}" x2="${x1}" y2="${py.toFixed(2)}" ` +
        `stroke="#555555" stroke-dasharray="6 4"/>`,
      `<text x="${x1 - 4}" y="${(py - 6).toFixed(2)}" text-anchor="end" font-size="12" ` +
        `fill="#555555">${esc(label)}</text>`,
    );
  }

  legend(entries: [string, string][]): void {
    const x = WIDTH - MARGIN.right - 200;
    let y = MARGIN.top + 8;
    for (const [label, color] of entries) {
      this.parts.push(
        `<rect x="${x}" y="${y - 10}" width="14" height="14" fill="${color}"/>`,
        `<text x="${x + 20}" y="${y + 2}" font-size="13">${esc(label)}</text>`,
      );
      y += 20;
    }
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}
