import { promises as fs } from "node:fs";
import path from "node:path";

import { renderChart } from "./chart.js";
import { parseFigureCsv, SchemaError } from "./csv.js";

export type Format = "png" | "svg";

export const FIGURES: Record<string, { title: string; yLabel: string }> = {
  fig1a: { title: "Understanding (F1)", yLabel: "mean F1" },
  fig1b: { title: "Lexicon size", yLabel: "mappings per agent" },
  fig2a: { title: "Lexicon use", yLabel: "matched / intended tokens" },
  fig2b: { title: "Lexicon precision", yLabel: "correct / matched tokens" },
  fig3a: { title: "Distinct meanings", yLabel: "meanings per agent" },
  fig3b: { title: "Distinct forms", yLabel: "forms per agent" },
  fig4a: { title: "Synonymy", yLabel: "mappings per meaning" },
  fig4b: { title: "Homonymy", yLabel: "mappings per form" },
  fig5a: { title: "Mapping share (average)", yLabel: "agents per mapping" },
  fig5b: { title: "Mapping share (exactly k agents)", yLabel: "ratio of mappings" },
};

async function toPng(svg: string): Promise<Buffer> {
  const { Resvg } = await import("@resvg/resvg-js");
  return new Resvg(svg, { fitTo: { mode: "width", value: 1280 } }).render().asPng();
}

/** Render every figure CSV in inDir to outDir, copying the CSVs verbatim
 * next to the images. The input directory is never written to. */
export async function renderAll(
  inDir: string,
  outDir: string,
  format: Format = "svg"
): Promise<string[]> {
  if (format !== "png" && format !== "svg") {
    throw new SchemaError(`unsupported format '${format}'`);
  }
  await fs.mkdir(outDir, { recursive: true });
  const written: string[] = [];
  for (const [id, spec] of Object.entries(FIGURES)) {
    const csvPath = path.join(inDir, `${id}.csv`);
    let raw: Buffer;
    try {
      raw = await fs.readFile(csvPath);
    } catch {
      throw new SchemaError(`missing figure data: ${csvPath}`);
    }
    const rows = parseFigureCsv(raw.toString("utf-8"), `${id}.csv`);
    const svg = renderChart(rows, spec);
    const imgPath = path.join(outDir, `${id}.${format}`);
    await fs.writeFile(imgPath, format === "svg" ? svg : await toPng(svg));
    // verbatim copy: the plotted-data record next to the image
    const copyPath = path.join(outDir, `${id}.csv`);
    if (path.resolve(copyPath) !== path.resolve(csvPath)) {
      await fs.writeFile(copyPath, raw);
    }
    written.push(imgPath);
  }
  return written;
}
