import { readFileSync } from "node:fs";
import Papa from "papaparse";

export interface Table {
  header: string[];
  /** Row-major cells; empty CSV cells become null. */
  rows: (number | string | null)[][];
}

export class MissingColumnError extends Error {
  constructor(column: string, header: string[]) {
    super(`column '${column}' not found in header (available: ${header.join(", ")})`);
    this.name = "MissingColumnError";
  }
}

export function readTable(path: string): Table {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  const data = parsed.data;
  if (data.length === 0) {
    throw new Error("no rows: CSV is empty");
  }
  const header = data[0].map((h) => h.trim());
  const rows = data.slice(1).map((raw) =>
    raw.map((cell) => {
      const s = cell.trim();
      if (s === "") return null;
      const v = Number(s);
      return Number.isFinite(v) ? v : s;
    }),
  );
  if (rows.length === 0) {
    throw new Error("no rows: CSV has a header but no data");
  }
  return { header, rows };
}

export function columnIndex(table: Table, name: string): number {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new MissingColumnError(name, table.header);
  }
  return idx;
}

/** Numeric values of one column; null cells and non-numbers skipped via mask. */
export function numericColumn(table: Table, name: string): (number | null)[] {
  const idx = columnIndex(table, name);
  return table.rows.map((row) => {
    const v = row[idx];
    return typeof v === "number" ? v : null;
  });
}
