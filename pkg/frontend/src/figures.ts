import { FigureKind, Table, num } from "./csv.js";

export interface Series {
  label: string;
  color: string;
  dashed: boolean;
  x: number[];
  y: number[];
}

export interface Marker {
  x: number;
  y: number;
  label: string;
}

export interface LineFigure {
  kind: "rate-vs-snr" | "ee-vs-ns";
  xLabel: string;
  yLabel: string;
  series: Series[];
  markers: Marker[];
}

export interface HeatmapFigure {
  kind: "ee-surface";
  xLabel: string;
  yLabel: string;
  zLabel: string;
  xs: number[];
  ys: number[];
  /** cells[yi][xi]; null where the grid has no sample */
  cells: (number | null)[][];
  markers: Marker[];
}

export type Figure = LineFigure | HeatmapFigure;

export const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

/** Build the figure object model for a classified table. */
export function buildFigure(table: Table, source: string): Figure {
  switch (table.kind) {
    case "rate-vs-snr":
      return rateFigure(table.rows, source);
    case "ee-vs-ns":
      return sweepFigure(table.rows, source);
    case "ee-surface":
      return surfaceFigure(table.rows, source);
  }
}

export function describeFigure(fig: Figure): string {
  if (fig.kind === "ee-surface") {
    return `${fig.kind}, ${fig.xs.length}x${fig.ys.length} cells, ${fig.markers.length} marks`;
  }
  return `${fig.kind}, ${fig.series.length} series, ${fig.markers.length} marks`;
}

interface RateGroup {
  sizes: [number, number, number, number];
  method: string;
  points: { x: number; y: number }[];
}

// One curve per (surface sizes, element counts, method); th/mc pairs share a
// colour and the simulated one is dashed.
function rateFigure(rows: Record<string, string>[], source: string): LineFigure {
  const groups = new Map<string, RateGroup>();
  for (const row of rows) {
    const sizes: [number, number, number, number] = [
      num(row, "L_s", source),
      num(row, "L_r", source),
      num(row, "N_s", source),
      num(row, "N_r", source),
    ];
    const method = row["method"];
    if (method !== "th" && method !== "mc") {
      throw new Error(`${source}: unknown method '${method}' (expected th or mc)`);
    }
    const key = `${sizes.join("|")}|${method}`;
    let group = groups.get(key);
    if (!group) {
      group = { sizes, method, points: [] };
      groups.set(key, group);
    }
    group.points.push({ x: num(row, "snr_db", source), y: num(row, "sum_rate", source) });
  }

  const ordered = [...groups.values()].sort((a, b) => {
    for (let i = 0; i < 4; i++) {
      if (a.sizes[i] !== b.sizes[i]) return a.sizes[i] - b.sizes[i];
    }
    return a.method === b.method ? 0 : a.method === "th" ? -1 : 1;
  });

  const colorIndex = new Map<string, number>();
  const series = ordered.map((group) => {
    const sizeKey = group.sizes.join("|");
    if (!colorIndex.has(sizeKey)) colorIndex.set(sizeKey, colorIndex.size);
    const [Ls, Lr, Ns, Nr] = group.sizes;
    const label =
      Ls === Lr && Ns === Nr
        ? `L=${Ls} N=${Ns} ${group.method}`
        : `Ls=${Ls} Lr=${Lr} Ns=${Ns} Nr=${Nr} ${group.method}`;
    const points = [...group.points].sort((a, b) => a.x - b.x);
    return {
      label,
      color: PALETTE[colorIndex.get(sizeKey)! % PALETTE.length],
      dashed: group.method === "mc",
      x: points.map((p) => p.x),
      y: points.map((p) => p.y),
    };
  });

  return { kind: "rate-vs-snr", xLabel: "SNR (dB)", yLabel: "sum rate", series, markers: [] };
}

// One curve per transmit power, plus a marker on every row flagged as the
// argmax of its curve.
function sweepFigure(rows: Record<string, string>[], source: string): LineFigure {
  const groups = new Map<string, { x: number; y: number }[]>();
  const markers: Marker[] = [];
  for (const row of rows) {
    const pu = row["p_u"] ?? "";
    num(row, "p_u", source);
    const x = num(row, "N_s", source);
    const y = num(row, "ee", source);
    const flag = row["is_opt"];
    if (flag !== "0" && flag !== "1") {
      throw new Error(`${source}: is_opt must be 0 or 1, got '${flag}'`);
    }
    if (flag === "1") markers.push({ x, y, label: `N_s*=${x}` });
    const points = groups.get(pu);
    if (points) points.push({ x, y });
    else groups.set(pu, [{ x, y }]);
  }

  const series = [...groups.entries()]
    .sort((a, b) => Number(a[0]) - Number(b[0]))
    .map(([pu, points], i) => {
      const sorted = [...points].sort((a, b) => a.x - b.x);
      return {
        label: `p_u=${pu}`,
        color: PALETTE[i % PALETTE.length],
        dashed: false,
        x: sorted.map((p) => p.x),
        y: sorted.map((p) => p.y),
      };
    });

  return { kind: "ee-vs-ns", xLabel: "N_s", yLabel: "efficiency", series, markers };
}

// Dense cell grid plus two special rows: the grid argmax and the analytic
// optimum, both turned into annotated markers.
function surfaceFigure(rows: Record<string, string>[], source: string): HeatmapFigure {
  const cellsByKey = new Map<string, number>();
  const markers: Marker[] = [];
  const xsSet = new Set<number>();
  const ysSet = new Set<number>();

  for (const row of rows) {
    const tag = row["kind"];
    const x = num(row, "N_s", source);
    const y = num(row, "N_r", source);
    const v = num(row, "ee", source);
    if (tag === "grid") {
      const key = `${x}|${y}`;
      if (cellsByKey.has(key)) {
        throw new Error(`${source}: duplicate grid cell (${x}, ${y})`);
      }
      cellsByKey.set(key, v);
      xsSet.add(x);
      ysSet.add(y);
    } else if (tag === "grid_argmax") {
      markers.push({ x, y, label: `grid argmax (${x}, ${y})` });
    } else if (tag === "analytic_opt") {
      markers.push({ x, y, label: `analytic optimum (${x}, ${y})` });
    } else {
      throw new Error(`${source}: unknown row kind '${tag}'`);
    }
  }
  if (cellsByKey.size === 0) {
    throw new Error(`${source}: no grid rows`);
  }

  const xs = [...xsSet].sort((a, b) => a - b);
  const ys = [...ysSet].sort((a, b) => a - b);
  const cells = ys.map((y) => xs.map((x) => cellsByKey.get(`${x}|${y}`) ?? null));

  return {
    kind: "ee-surface",
    xLabel: "N_s",
    yLabel: "N_r",
    zLabel: "efficiency",
    xs,
    ys,
    cells,
    markers,
  };
}
