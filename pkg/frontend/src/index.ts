export { SCHEMAS, readTable } from "./csv.js";
export type { FigureKind, Table } from "./csv.js";
export { PALETTE, buildFigure, describeFigure } from "./figures.js";
export type { Figure, HeatmapFigure, LineFigure, Marker, Series } from "./figures.js";
export { heatColor, renderFigure, ticks } from "./svg.js";
export { renderDir, renderFile } from "./render.js";
export type { FigureSpec, RenderedFile } from "./render.js";
