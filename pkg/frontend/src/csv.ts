export interface FigureRow {
  p_sm: number;
  series: string;
  mean: number;
  sem: number;
}

export class SchemaError extends Error {}

const REQUIRED = ["p_sm", "series", "mean", "sem"] as const;

/** Parse one per-figure CSV (p_sm,series,mean,sem).
 *
 * The pipeline never quotes cells (values are numbers and plain series
 * labels), so a strict line/comma split is exact. Quoted input is
 * rejected rather than mis-parsed. */
export function parseFigureCsv(text: string, name: string): FigureRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${name}: empty file`);
  }
  if (text.includes('"')) {
    throw new SchemaError(`${name}: quoted cells are not supported`);
  }
  const header = lines[0].split(",");
  const idx: Record<string, number> = {};
  header.forEach((col, i) => {
    idx[col.trim()] = i;
  });
  for (const col of REQUIRED) {
    if (!(col in idx)) {
      throw new SchemaError(`${name}: missing column '${col}'`);
    }
  }
  if (lines.length === 1) {
    throw new SchemaError(`${name}: no data rows`);
  }
  return lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new SchemaError(`${name}: ragged data row ${i + 1}`);
    }
    const row: FigureRow = {
      p_sm: Number(cells[idx.p_sm]),
      series: cells[idx.series],
      mean: Number(cells[idx.mean]),
      sem: Number(cells[idx.sem]),
    };
    if (!Number.isFinite(row.p_sm) || !Number.isFinite(row.mean) || !Number.isFinite(row.sem)) {
      throw new SchemaError(`${name}: non-numeric value on data row ${i + 1}`);
    }
    return row;
  });
}
