import { Figure, HeatmapFigure, LineFigure, Marker } from "./figures.js";

// Fixed canvas: plot area on the left, legend / colorbar panel on the right.
// Everything below formats numbers through px() or tickText() so that a given
// figure always serializes to the same bytes.
const W = 880;
const H = 480;
const PLOT = { left: 64, right: 688, top: 24, bottom: 420 };
const PANEL_X = 700;

const FONT = 'font-family="Helvetica, Arial, sans-serif"';
const DASH = 'stroke-dasharray="6 4"';

function px(v: number): string {
  return v.toFixed(2);
}

function tickText(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e5 || a < 1e-3) return v.toExponential(2);
  return String(parseFloat(v.toPrecision(8)));
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function niceNum(range: number, round: boolean): number {
  const exp = Math.floor(Math.log10(range));
  const f = range / 10 ** exp;
  let nf: number;
  if (round) nf = f < 1.5 ? 1 : f < 3 ? 2 : f < 7 ? 5 : 10;
  else nf = f <= 1 ? 1 : f <= 2 ? 2 : f <= 5 ? 5 : 10;
  return nf * 10 ** exp;
}

/** Loose round tick positions spanning [lo, hi]. */
export function ticks(lo: number, hi: number, count = 6): number[] {
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) {
    throw new Error(`cannot place ticks on [${lo}, ${hi}]`);
  }
  if (lo === hi) {
    lo -= lo === 0 ? 1 : Math.abs(lo) * 0.5;
    hi += hi === 0 ? 1 : Math.abs(hi) * 0.5;
  }
  const step = niceNum(niceNum(hi - lo, false) / (count - 1), true);
  const start = Math.floor(lo / step) * step;
  const stop = Math.ceil(hi / step) * step;
  const out: number[] = [];
  for (let v = start; v <= stop + step / 2; v += step) {
    out.push(parseFloat(v.toPrecision(12)));
  }
  return out;
}

export function renderFigure(fig: Figure): string {
  const body = fig.kind === "ee-surface" ? renderHeatmap(fig) : renderLines(fig);
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" viewBox="0 0 ${W} ${H}">`,
    `<rect width="${W}" height="${H}" fill="#ffffff"/>`,
    body,
    "</svg>",
    "",
  ].join("\n");
}

interface Scale {
  (v: number): number;
  lo: number;
  hi: number;
}

function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const f = ((v: number) => outLo + ((v - lo) / (hi - lo)) * (outHi - outLo)) as Scale;
  f.lo = lo;
  f.hi = hi;
  return f;
}

function axes(xt: number[], yt: number[], sx: Scale, sy: Scale, xLabel: string, yLabel: string): string {
  const parts: string[] = [];
  for (const v of xt) {
    const x = px(sx(v));
    parts.push(`<line x1="${x}" y1="${px(PLOT.top)}" x2="${x}" y2="${px(PLOT.bottom)}" stroke="#e0e0e0" stroke-width="1"/>`);
    parts.push(`<text x="${x}" y="${px(PLOT.bottom + 16)}" ${FONT} font-size="11" text-anchor="middle">${tickText(v)}</text>`);
  }
  for (const v of yt) {
    const y = px(sy(v));
    parts.push(`<line x1="${px(PLOT.left)}" y1="${y}" x2="${px(PLOT.right)}" y2="${y}" stroke="#e0e0e0" stroke-width="1"/>`);
    parts.push(`<text x="${px(PLOT.left - 6)}" y="${y}" ${FONT} font-size="11" text-anchor="end" dominant-baseline="middle">${tickText(v)}</text>`);
  }
  parts.push(`<rect x="${px(PLOT.left)}" y="${px(PLOT.top)}" width="${px(PLOT.right - PLOT.left)}" height="${px(PLOT.bottom - PLOT.top)}" fill="none" stroke="#333333" stroke-width="1"/>`);
  const midX = px((PLOT.left + PLOT.right) / 2);
  const midY = px((PLOT.top + PLOT.bottom) / 2);
  parts.push(`<text x="${midX}" y="${px(H - 10)}" ${FONT} font-size="13" text-anchor="middle">${esc(xLabel)}</text>`);
  parts.push(`<text x="16" y="${midY}" ${FONT} font-size="13" text-anchor="middle" transform="rotate(-90 16 ${midY})">${esc(yLabel)}</text>`);
  return parts.join("\n");
}

function markerShapes(markers: Marker[], sx: Scale, sy: Scale): string {
  const parts: string[] = [];
  for (const m of markers) {
    const x = sx(m.x);
    const y = sy(m.y);
    parts.push(`<circle class="marker" cx="${px(x)}" cy="${px(y)}" r="4" fill="#000000" stroke="#ffffff" stroke-width="1"/>`);
    parts.push(
      `<text x="${px(x + 7)}" y="${px(y - 7)}" ${FONT} font-size="11" paint-order="stroke" stroke="#ffffff" stroke-width="3">${esc(m.label)}</text>`,
    );
  }
  return parts.join("\n");
}

function renderLines(fig: LineFigure): string {
  const xsAll: number[] = [];
  const ysAll: number[] = [];
  for (const s of fig.series) {
    xsAll.push(...s.x);
    ysAll.push(...s.y);
  }
  for (const m of fig.markers) {
    xsAll.push(m.x);
    ysAll.push(m.y);
  }
  if (xsAll.length === 0) throw new Error("figure has no points");

  const xt = ticks(Math.min(...xsAll), Math.max(...xsAll));
  const yt = ticks(Math.min(...ysAll), Math.max(...ysAll));
  const sx = linearScale(xt[0], xt[xt.length - 1], PLOT.left, PLOT.right);
  const sy = linearScale(yt[0], yt[yt.length - 1], PLOT.bottom, PLOT.top);

  const parts: string[] = [axes(xt, yt, sx, sy, fig.xLabel, fig.yLabel)];
  for (const s of fig.series) {
    const pts = s.x.map((v, i) => `${px(sx(v))},${px(sy(s.y[i]))}`).join(" ");
    const dash = s.dashed ? ` ${DASH}` : "";
    parts.push(`<polyline class="series" points="${pts}" fill="none" stroke="${s.color}" stroke-width="1.5"${dash}/>`);
  }
  parts.push(markerShapes(fig.markers, sx, sy));

  // legend panel
  fig.series.forEach((s, i) => {
    const y = PLOT.top + 10 + i * 18;
    const dash = s.dashed ? ` ${DASH}` : "";
    parts.push(`<line x1="${PANEL_X}" y1="${y}" x2="${PANEL_X + 26}" y2="${y}" stroke="${s.color}" stroke-width="1.5"${dash}/>`);
    parts.push(`<text x="${PANEL_X + 32}" y="${y}" ${FONT} font-size="11" dominant-baseline="middle">${esc(s.label)}</text>`);
  });
  return parts.join("\n");
}

// Fixed 9-stop colour ramp, linearly interpolated.
const RAMP: [number, number, number][] = [
  [68, 1, 84], [70, 50, 126], [54, 92, 141], [39, 127, 142], [31, 161, 135],
  [74, 193, 109], [160, 218, 57], [223, 227, 24], [253, 231, 37],
];

export function heatColor(t: number): string {
  const c = Math.min(Math.max(t, 0), 1) * (RAMP.length - 1);
  const i = Math.min(Math.floor(c), RAMP.length - 2);
  const f = c - i;
  const ch = (k: 0 | 1 | 2) => Math.round(RAMP[i][k] + (RAMP[i + 1][k] - RAMP[i][k]) * f);
  return `rgb(${ch(0)},${ch(1)},${ch(2)})`;
}

// Fractional cell index of a value on a sorted grid axis; values between two
// grid points land between the two cell centres, values outside clamp.
function gridPos(vals: number[], v: number): number {
  if (v <= vals[0]) return 0;
  const last = vals.length - 1;
  if (v >= vals[last]) return last;
  let i = 0;
  while (vals[i + 1] < v) i++;
  return i + (v - vals[i]) / (vals[i + 1] - vals[i]);
}

function renderHeatmap(fig: HeatmapFigure): string {
  const flat = fig.cells.flat().filter((v): v is number => v !== null);
  let lo = Math.min(...flat);
  let hi = Math.max(...flat);
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }

  const cw = (PLOT.right - PLOT.left) / fig.xs.length;
  const ch = (PLOT.bottom - PLOT.top) / fig.ys.length;
  const cellX = (xi: number) => PLOT.left + xi * cw;
  // row 0 (smallest N_r) sits at the bottom
  const cellY = (yi: number) => PLOT.bottom - (yi + 1) * ch;

  const parts: string[] = [];
  fig.cells.forEach((row, yi) => {
    row.forEach((v, xi) => {
      if (v === null) return;
      const fill = heatColor((v - lo) / (hi - lo));
      parts.push(
        `<rect class="cell" x="${px(cellX(xi))}" y="${px(cellY(yi))}" width="${px(cw)}" height="${px(ch)}" fill="${fill}"/>`,
      );
    });
  });

  // tick labels at cell centres, thinned so at most ~10 appear per axis
  const xStep = Math.max(1, Math.ceil(fig.xs.length / 10));
  fig.xs.forEach((v, xi) => {
    if (xi % xStep !== 0) return;
    const x = px(cellX(xi) + cw / 2);
    parts.push(`<text x="${x}" y="${px(PLOT.bottom + 16)}" ${FONT} font-size="11" text-anchor="middle">${tickText(v)}</text>`);
  });
  const yStep = Math.max(1, Math.ceil(fig.ys.length / 10));
  fig.ys.forEach((v, yi) => {
    if (yi % yStep !== 0) return;
    const y = px(cellY(yi) + ch / 2);
    parts.push(`<text x="${px(PLOT.left - 6)}" y="${y}" ${FONT} font-size="11" text-anchor="end" dominant-baseline="middle">${tickText(v)}</text>`);
  });
  parts.push(`<rect x="${px(PLOT.left)}" y="${px(PLOT.top)}" width="${px(PLOT.right - PLOT.left)}" height="${px(PLOT.bottom - PLOT.top)}" fill="none" stroke="#333333" stroke-width="1"/>`);
  const midX = px((PLOT.left + PLOT.right) / 2);
  const midY = px((PLOT.top + PLOT.bottom) / 2);
  parts.push(`<text x="${midX}" y="${px(H - 10)}" ${FONT} font-size="13" text-anchor="middle">${esc(fig.xLabel)}</text>`);
  parts.push(`<text x="16" y="${midY}" ${FONT} font-size="13" text-anchor="middle" transform="rotate(-90 16 ${midY})">${esc(fig.yLabel)}</text>`);

  // colorbar: 64 stacked bands, max at the top
  const barX = PANEL_X;
  const barW = 22;
  const bands = 64;
  const bandH = (PLOT.bottom - PLOT.top) / bands;
  for (let b = 0; b < bands; b++) {
    const y = PLOT.bottom - (b + 1) * bandH;
    parts.push(
      `<rect class="colorbar" x="${barX}" y="${px(y)}" width="${barW}" height="${px(bandH + 0.5)}" fill="${heatColor((b + 0.5) / bands)}"/>`,
    );
  }
  parts.push(`<rect x="${barX}" y="${px(PLOT.top)}" width="${barW}" height="${px(PLOT.bottom - PLOT.top)}" fill="none" stroke="#333333" stroke-width="1"/>`);
  parts.push(`<text x="${barX + barW + 6}" y="${px(PLOT.top + 4)}" ${FONT} font-size="11">${tickText(hi)}</text>`);
  parts.push(`<text x="${barX + barW + 6}" y="${px(PLOT.bottom)}" ${FONT} font-size="11">${tickText(lo)}</text>`);
  parts.push(`<text x="${barX}" y="${px(PLOT.top - 8)}" ${FONT} font-size="12">${esc(fig.zLabel)}</text>`);

  // markers: cross for the grid argmax, open circle for the analytic point
  const markerLegend: string[] = [];
  for (const m of fig.markers) {
    const x = cellX(gridPos(fig.xs, m.x)) + cw / 2;
    const y = cellY(gridPos(fig.ys, m.y)) + ch / 2;
    if (m.label.startsWith("grid argmax")) {
      parts.push(`<g class="marker" stroke="#ffffff" stroke-width="2.5">` +
        `<line x1="${px(x - 6)}" y1="${px(y - 6)}" x2="${px(x + 6)}" y2="${px(y + 6)}"/>` +
        `<line x1="${px(x - 6)}" y1="${px(y + 6)}" x2="${px(x + 6)}" y2="${px(y - 6)}"/></g>`);
      markerLegend.push(`x  ${m.label}`);
    } else {
      parts.push(`<circle class="marker" cx="${px(x)}" cy="${px(y)}" r="6" fill="none" stroke="#ffffff" stroke-width="2.5"/>`);
      markerLegend.push(`o  ${m.label}`);
    }
  }
  markerLegend.sort();
  markerLegend.forEach((label, i) => {
    parts.push(
      `<text x="${barX}" y="${px(H - 30 + i * 14)}" ${FONT} font-size="10">${esc(label)}</text>`,
    );
  });

  return parts.join("\n");
}
