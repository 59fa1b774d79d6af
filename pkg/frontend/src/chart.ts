import type { FigureRow } from "./csv.js";

export interface ChartOptions {
  title: string;
  yLabel: string;
}

const WIDTH = 640;
const HEIGHT = 440;
const MARGIN = { top: 48, right: 150, bottom: 52, left: 64 };

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#e377c2",
  "#17becf",
  "#bcbd22",
  "#7f7f7f",
];

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function fmtTick(v: number): string {
  const a = Math.abs(v);
  if (a !== 0 && (a < 0.01 || a >= 10000)) return v.toExponential(1);
  return String(Number(v.toFixed(3)));
}

/** 4-6 round tick values covering [0, hi]. */
function yTicks(hi: number): number[] {
  if (hi <= 0) return [0, 1];
  const step = Math.pow(10, Math.floor(Math.log10(hi / 4)));
  const mult = [1, 2, 2.5, 5, 10].find((m) => hi / (step * m) <= 6) ?? 10;
  const s = step * mult;
  const ticks: number[] = [];
  for (let v = 0; v <= hi + s * 1e-9; v += s) ticks.push(Number(v.toPrecision(12)));
  return ticks;
}

/** Grouped line chart with sem error bars; deterministic SVG string. */
export function renderChart(rows: FigureRow[], opts: ChartOptions): string {
  const series: string[] = [];
  for (const r of rows) if (!series.includes(r.series)) series.push(r.series);
  const xs = [...new Set(rows.map((r) => r.p_sm))].sort((a, b) => a - b);
  const xMin = xs[0];
  const xMax = xs.length > 1 ? xs[xs.length - 1] : xs[0] + 1;
  const yHi = Math.max(...rows.map((r) => r.mean + r.sem), 1e-12);
  const ticks = yTicks(yHi);
  const yMax = Math.max(ticks[ticks.length - 1], yHi);

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const sx = (v: number) => MARGIN.left + ((v - xMin) / (xMax - xMin)) * plotW;
  const sy = (v: number) => MARGIN.top + plotH - (v / yMax) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    `<text x="${MARGIN.left + plotW / 2}" y="24" text-anchor="middle" font-size="15">${esc(opts.title)}</text>`
  );

  // axes and grid
  for (const t of ticks) {
    const y = sy(t);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + plotW}" y2="${y}" stroke="#ddd"/>`,
      `<text x="${MARGIN.left - 8}" y="${y + 4}" text-anchor="end" font-size="11">${fmtTick(t)}</text>`
    );
  }
  for (const v of xs) {
    const x = sx(v);
    parts.push(
      `<line x1="${x}" y1="${MARGIN.top + plotH}" x2="${x}" y2="${MARGIN.top + plotH + 5}" stroke="#333"/>`,
      `<text x="${x}" y="${MARGIN.top + plotH + 20}" text-anchor="middle" font-size="11">${fmtTick(v)}</text>`
    );
  }
  parts.push(
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" y2="${MARGIN.top + plotH}" stroke="#333"/>`,
    `<line x1="${MARGIN.left}" y1="${MARGIN.top + plotH}" x2="${MARGIN.left + plotW}" y2="${MARGIN.top + plotH}" stroke="#333"/>`,
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 14}" text-anchor="middle" font-size="12">p_sm</text>`,
    `<text x="18" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="12" ` +
      `transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">${esc(opts.yLabel)}</text>`
  );

  series.forEach((name, si) => {
    const color = PALETTE[si % PALETTE.length];
    const pts = rows
      .filter((r) => r.series === name)
      .slice()
      .sort((a, b) => a.p_sm - b.p_sm);
    const path = pts.map((p) => `${sx(p.p_sm)},${sy(p.mean)}`).join(" ");
    parts.push(`<polyline points="${path}" fill="none" stroke="${color}" stroke-width="2"/>`);
    for (const p of pts) {
      const x = sx(p.p_sm);
      const y0 = sy(p.mean - p.sem);
      const y1 = sy(p.mean + p.sem);
      parts.push(
        `<line x1="${x}" y1="${y0}" x2="${x}" y2="${y1}" stroke="${color}"/>`,
        `<line x1="${x - 4}" y1="${y0}" x2="${x + 4}" y2="${y0}" stroke="${color}"/>`,
        `<line x1="${x - 4}" y1="${y1}" x2="${x + 4}" y2="${y1}" stroke="${color}"/>`,
        `<circle cx="${x}" cy="${sy(p.mean)}" r="3.5" fill="${color}" data-series="${esc(name)}" ` +
          `data-x="${p.p_sm}" data-mean="${p.mean}" data-sem="${p.sem}"/>`
      );
    }
    const ly = MARGIN.top + 6 + si * 18;
    const lx = MARGIN.left + plotW + 14;
    parts.push(
      `<line x1="${lx}" y1="${ly}" x2="${lx + 20}" y2="${ly}" stroke="${color}" stroke-width="2"/>`,
      `<text x="${lx + 26}" y="${ly + 4}" font-size="11">${esc(name)}</text>`
    );
  });

  parts.push("</svg>");
  return parts.join("\n");
}
