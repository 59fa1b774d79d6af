import { promises as fs } from "node:fs";
import os from "node:os";
import path from "node:path";
import { fileURLToPath } from "node:url";

import { beforeAll, describe, expect, it } from "vitest";

import { renderChart } from "../src/chart.js";
import { parseFigureCsv, SchemaError } from "../src/csv.js";
import { FIGURES, renderAll } from "../src/render.js";
import { main } from "../src/cli.js";

const FIXTURES = path.join(path.dirname(fileURLToPath(import.meta.url)), "fixtures");
const FIG_IDS = Object.keys(FIGURES);

async function tmpdir(): Promise<string> {
  return fs.mkdtemp(path.join(os.tmpdir(), "figures-"));
}

describe("parseFigureCsv", () => {
  it("parses a fixture file", async () => {
    const text = await fs.readFile(path.join(FIXTURES, "fig1a.csv"), "utf-8");
    const rows = parseFigureCsv(text, "fig1a.csv");
    expect(rows.length).toBeGreaterThan(0);
    expect(rows[0]).toHaveProperty("p_sm");
    expect(new Set(rows.map((r) => r.series))).toEqual(new Set(["fixed", "community"]));
  });

  it("rejects a missing column by name", () => {
    expect(() => parseFigureCsv("p_sm,series,mean\n0,fixed,1\n", "x.csv")).toThrow(
      /missing column 'sem'/
    );
  });

  it("rejects an empty table", () => {
    expect(() => parseFigureCsv("p_sm,series,mean,sem\n", "x.csv")).toThrow(SchemaError);
  });

  it("rejects non-numeric cells", () => {
    expect(() => parseFigureCsv("p_sm,series,mean,sem\n0,fixed,oops,0\n", "x.csv")).toThrow(
      /non-numeric/
    );
  });
});

describe("renderChart", () => {
  it("is deterministic and embeds every data point", async () => {
    const text = await fs.readFile(path.join(FIXTURES, "fig5b.csv"), "utf-8");
    const rows = parseFigureCsv(text, "fig5b.csv");
    const svg = renderChart(rows, FIGURES.fig5b);
    expect(renderChart(rows, FIGURES.fig5b)).toBe(svg);
    for (const row of rows) {
      expect(svg).toContain(`data-series="${row.series}" data-x="${row.p_sm}" data-mean="${row.mean}"`);
    }
    const circles = svg.match(/<circle /g) ?? [];
    expect(circles.length).toBe(rows.length);
  });

  it("handles a single-series table", async () => {
    const text = await fs.readFile(path.join(FIXTURES, "fig1a.csv"), "utf-8");
    const rows = parseFigureCsv(text, "fig1a.csv").filter((r) => r.series === "fixed");
    const svg = renderChart(rows, FIGURES.fig1a);
    expect(svg).toContain("<svg");
    expect(svg).not.toContain(">community<");
  });
});

describe("renderAll", () => {
  let out: string;

  beforeAll(async () => {
    out = await tmpdir();
    await renderAll(FIXTURES, out, "svg");
  });

  it("writes all ten non-empty SVG figures", async () => {
    for (const id of FIG_IDS) {
      const stat = await fs.stat(path.join(out, `${id}.svg`));
      expect(stat.size).toBeGreaterThan(0);
    }
  });

  it("copies the per-figure CSVs byte for byte", async () => {
    for (const id of FIG_IDS) {
      const src = await fs.readFile(path.join(FIXTURES, `${id}.csv`));
      const dst = await fs.readFile(path.join(out, `${id}.csv`));
      expect(dst.equals(src)).toBe(true);
    }
  });

  it("leaves the input directory untouched", async () => {
    const entries = await fs.readdir(FIXTURES);
    expect(entries.sort()).toEqual(FIG_IDS.map((id) => `${id}.csv`).sort());
  });

  it("renders PNG files with the PNG signature", async () => {
    const pngOut = await tmpdir();
    await renderAll(FIXTURES, pngOut, "png");
    for (const id of FIG_IDS) {
      const buf = await fs.readFile(path.join(pngOut, `${id}.png`));
      expect(buf.subarray(0, 8)).toEqual(
        Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a])
      );
    }
  });

  it("fails when a figure CSV is absent", async () => {
    const partial = await tmpdir();
    await fs.copyFile(path.join(FIXTURES, "fig1a.csv"), path.join(partial, "fig1a.csv"));
    await expect(renderAll(partial, await tmpdir())).rejects.toThrow(/missing figure data/);
  });
});

describe("cli", () => {
  it("runs the full render and exits 0", async () => {
    const out = await tmpdir();
    const code = await main(["--in", FIXTURES, "--out", out]);
    expect(code).toBe(0);
    expect((await fs.readdir(out)).filter((f) => f.endsWith(".svg")).length).toBe(10);
  });

  it("reports bad usage and bad input as exit 1", async () => {
    expect(await main(["--out", "/tmp/x"])).toBe(1);
    expect(await main(["--in", await tmpdir(), "--out", await tmpdir()])).toBe(1);
    expect(await main(["--in", FIXTURES, "--out", await tmpdir(), "--format", "gif"])).toBe(1);
  });
});
