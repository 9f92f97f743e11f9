import fs from "node:fs";
import os from "node:os";
import path from "node:path";
import { afterEach, describe, expect, it, vi } from "vitest";
import { main } from "../src/cli.js";
import { renderDir, renderFile } from "../src/render.js";
import { RATES_CSV, SURFACE_CSV, SWEEP_CSV } from "./fixtures.js";

const scratch: string[] = [];

function tmp(): string {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), "figs-"));
  scratch.push(dir);
  return dir;
}

function csvDir(): string {
  const dir = tmp();
  fs.writeFileSync(path.join(dir, "rates.csv"), RATES_CSV);
  fs.writeFileSync(path.join(dir, "ee_sweep.csv"), SWEEP_CSV);
  fs.writeFileSync(path.join(dir, "ee_surface.csv"), SURFACE_CSV);
  return dir;
}

afterEach(() => {
  while (scratch.length > 0) {
    fs.rmSync(scratch.pop()!, { recursive: true, force: true });
  }
  vi.restoreAllMocks();
});

describe("renderDir", () => {
  it("writes one image per CSV, names preserved", () => {
    const out = path.join(tmp(), "nested", "figs");
    const rendered = renderDir(csvDir(), out);
    expect(rendered.map((r) => path.basename(r.output))).toEqual([
      "ee_surface.svg",
      "ee_sweep.svg",
      "rates.svg",
    ]);
    expect(rendered.map((r) => r.kind)).toEqual(["ee-surface", "ee-vs-ns", "rate-vs-snr"]);
    for (const r of rendered) {
      expect(fs.existsSync(r.output)).toBe(true);
    }
  });

  it("reproduces identical bytes on a rerun", () => {
    const inDir = csvDir();
    const out1 = path.join(tmp(), "a");
    const out2 = path.join(tmp(), "b");
    renderDir(inDir, out1);
    renderDir(inDir, out2);
    for (const name of ["rates.svg", "ee_sweep.svg", "ee_surface.svg"]) {
      const a = fs.readFileSync(path.join(out1, name), "utf8");
      const b = fs.readFileSync(path.join(out2, name), "utf8");
      expect(a).toBe(b);
    }
  });

  it("rejects a directory without CSVs and a missing directory", () => {
    expect(() => renderDir(tmp(), tmp())).toThrow(/no \.csv files/);
    expect(() => renderDir("/nonexistent/place", tmp())).toThrow(/not a directory/);
  });

  it("names the offending file when one CSV is malformed", () => {
    const inDir = csvDir();
    fs.writeFileSync(path.join(inDir, "broken.csv"), "foo,bar\n1,2\n");
    expect(() => renderDir(inDir, tmp())).toThrow(/broken\.csv/);
  });
});

describe("renderFile", () => {
  it("honours axis label overrides", () => {
    const inDir = csvDir();
    const output = path.join(tmp(), "fig.svg");
    renderFile({
      input: path.join(inDir, "ee_sweep.csv"),
      output,
      yLabel: "bit/Hz/J",
    });
    expect(fs.readFileSync(output, "utf8")).toContain(">bit/Hz/J</text>");
  });

  it("rejects a missing input", () => {
    expect(() => renderFile({ input: "/no/such.csv", output: "/tmp/x.svg" })).toThrow(
      /does not exist/,
    );
  });
});

describe("cli", () => {
  it("renders a directory and reports each figure", () => {
    const lines: string[] = [];
    vi.spyOn(console, "log").mockImplementation((msg: string) => {
      lines.push(msg);
    });
    const code = main(["--in", csvDir(), "--out", path.join(tmp(), "figs")]);
    expect(code).toBe(0);
    expect(lines).toHaveLength(3);
    expect(lines[1]).toMatch(/ee_sweep\.csv -> .*ee_sweep\.svg \(ee-vs-ns, 3 series, 3 marks\)/);
  });

  it("fails usage without both flags or with unknown flags", () => {
    vi.spyOn(console, "error").mockImplementation(() => {});
    expect(main(["--in", "somewhere"])).toBe(2);
    expect(main(["--frobnicate"])).toBe(2);
  });

  it("fails cleanly on an empty input directory", () => {
    const errors: string[] = [];
    vi.spyOn(console, "error").mockImplementation((msg: string) => {
      errors.push(msg);
    });
    expect(main(["--in", tmp(), "--out", tmp()])).toBe(1);
    expect(errors[0]).toMatch(/no \.csv files/);
  });
});
