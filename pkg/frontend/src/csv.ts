// papaparse ships CommonJS only; the default import is the whole module
import Papa from "papaparse";

export type FigureKind = "rate-vs-snr" | "ee-vs-ns" | "ee-surface";

/** Column sets of the three CSV layouts the sweep CLI publishes. */
export const SCHEMAS: Record<FigureKind, readonly string[]> = {
  "rate-vs-snr": ["snr_db", "L_s", "L_r", "N_s", "N_r", "K", "method", "sum_rate"],
  "ee-vs-ns": ["p_u", "N_s", "ee", "is_opt"],
  "ee-surface": ["kind", "N_s", "N_r", "ee"],
};

export interface Table {
  kind: FigureKind;
  rows: Record<string, string>[];
}

/**
 * Parse CSV text and classify it against the published layouts.
 * Column order is free; the column set must match one layout exactly.
 */
export function readTable(text: string, source: string): Table {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    const where = e.row === undefined ? "" : ` (data row ${e.row + 1})`;
    throw new Error(`${source}: ${e.message}${where}`);
  }
  const columns = parsed.meta.fields ?? [];
  const kind = classify(columns, source);
  if (parsed.data.length === 0) {
    throw new Error(`${source}: no data rows`);
  }
  return { kind, rows: parsed.data };
}

function classify(columns: string[], source: string): FigureKind {
  let nearest: FigureKind | null = null;
  let nearestGap = Infinity;
  for (const kind of Object.keys(SCHEMAS) as FigureKind[]) {
    const want = SCHEMAS[kind];
    const missing = want.filter((c) => !columns.includes(c));
    const extra = columns.filter((c) => !want.includes(c));
    if (missing.length === 0 && extra.length === 0) return kind;
    if (missing.length + extra.length < nearestGap) {
      nearestGap = missing.length + extra.length;
      nearest = kind;
    }
  }
  if (nearest !== null && nearestGap <= 2) {
    const want = SCHEMAS[nearest];
    const missing = want.filter((c) => !columns.includes(c));
    const extra = columns.filter((c) => !want.includes(c));
    const parts = [];
    if (missing.length > 0) parts.push(`missing ${missing.join(", ")}`);
    if (extra.length > 0) parts.push(`unexpected ${extra.join(", ")}`);
    throw new Error(`${source}: header almost matches the ${nearest} layout but is ${parts.join("; ")}`);
  }
  const known = (Object.keys(SCHEMAS) as FigureKind[])
    .map((k) => `${k} [${SCHEMAS[k].join(",")}]`)
    .join(", ");
  throw new Error(`${source}: header [${columns.join(",")}] matches no published layout; known: ${known}`);
}

/** Read a numeric cell, rejecting anything that does not parse cleanly. */
export function num(row: Record<string, string>, column: string, source: string): number {
  const raw = row[column];
  const v = Number(raw);
  if (raw === undefined || raw === "" || !Number.isFinite(v)) {
    throw new Error(`${source}: column ${column} has non-numeric value '${raw}'`);
  }
  return v;
}
