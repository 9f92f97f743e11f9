import fs from "node:fs";
import path from "node:path";
import { FigureKind, readTable } from "./csv.js";
import { Figure, buildFigure, describeFigure } from "./figures.js";
import { renderFigure } from "./svg.js";

export interface FigureSpec {
  input: string;
  output: string;
  xLabel?: string;
  yLabel?: string;
}

/** Render one CSV to an SVG file and return the figure model that was drawn. */
export function renderFile(spec: FigureSpec): Figure {
  if (!fs.existsSync(spec.input)) {
    throw new Error(`input ${spec.input} does not exist`);
  }
  const source = path.basename(spec.input);
  const table = readTable(fs.readFileSync(spec.input, "utf8"), source);
  const fig = buildFigure(table, source);
  if (spec.xLabel !== undefined) fig.xLabel = spec.xLabel;
  if (spec.yLabel !== undefined) fig.yLabel = spec.yLabel;
  fs.mkdirSync(path.dirname(spec.output), { recursive: true });
  fs.writeFileSync(spec.output, renderFigure(fig));
  return fig;
}

export interface RenderedFile {
  input: string;
  output: string;
  kind: FigureKind;
  detail: string;
}

/** Render every .csv in a directory, one image per file, names preserved. */
export function renderDir(inDir: string, outDir: string): RenderedFile[] {
  if (!fs.existsSync(inDir) || !fs.statSync(inDir).isDirectory()) {
    throw new Error(`${inDir} is not a directory`);
  }
  const names = fs
    .readdirSync(inDir)
    .filter((name) => name.endsWith(".csv"))
    .sort();
  if (names.length === 0) {
    throw new Error(`no .csv files in ${inDir}`);
  }
  return names.map((name) => {
    const input = path.join(inDir, name);
    const output = path.join(outDir, name.replace(/\.csv$/, ".svg"));
    const fig = renderFile({ input, output });
    return { input, output, kind: fig.kind, detail: describeFigure(fig) };
  });
}
