#!/usr/bin/env node
import fs from "node:fs";
import path from "node:path";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";
import { renderDir } from "./render.js";

const USAGE = "usage: render_figs --in <csv dir> --out <image dir>";

export function main(argv: string[]): number {
  let values: { in?: string; out?: string };
  try {
    values = parseArgs({
      args: argv,
      options: { in: { type: "string" }, out: { type: "string" } },
    }).values;
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    console.error(USAGE);
    return 2;
  }
  if (!values.in || !values.out) {
    console.error(USAGE);
    return 2;
  }
  try {
    const rendered = renderDir(values.in, values.out);
    for (const r of rendered) {
      console.log(`${path.basename(r.input)} -> ${r.output} (${r.detail})`);
    }
    return 0;
  } catch (err) {
    console.error(`render error: ${err instanceof Error ? err.message : String(err)}`);
    return 1;
  }
}

const entry = process.argv[1];
if (entry && import.meta.url === pathToFileURL(fs.realpathSync(entry)).href) {
  process.exit(main(process.argv.slice(2)));
}
