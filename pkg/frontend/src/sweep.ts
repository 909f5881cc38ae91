import { writeFileSync } from "node:fs";
import { basename } from "node:path";
import { columnIndex, readTable } from "./csv.js";
import { Figure, HEIGHT, MARGIN, WIDTH, linearAxis } from "./svg.js";

export interface SweepSpec {
  summaryPath: string;
  output: string;
  title?: string;
  /** Horizon override for completed runs; defaults to 1.1x the latest stop. */
  horizon?: number;
}

export const STATUS_COLORS: Record<string, string> = {
  completed: "#2ca02c",
  "stopped:min_slope": "#d62728",
  "stopped:jacobian_floor": "#ff7f0e",
  "stopped:norm_ceiling": "#9467bd",
  "stopped:overflow": "#8c564b",
};

interface SweepRow {
  s: number;
  status: string;
  stopTime: number | null;
}

export function renderSweep(spec: SweepSpec): void {
  const table = readTable(spec.summaryPath);
  const sIdx = columnIndex(table, "s");
  const statusIdx = columnIndex(table, "status");
  const stopIdx = columnIndex(table, "stop_time");

  const rows: SweepRow[] = [];
  for (const raw of table.rows) {
    const s = raw[sIdx];
    const status = raw[statusIdx];
    const stop = raw[stopIdx];
    if (typeof s !== "number" || typeof status !== "string") {
      console.warn(`skipping malformed sweep row: ${JSON.stringify(raw)}`);
      continue;
    }
    rows.push({ s, status, stopTime: typeof stop === "number" ? stop : null });
  }
  if (rows.length === 0) {
    throw new Error("no rows: sweep summary holds no usable rows");
  }

  const stops = rows.filter((r) => r.stopTime !== null).map((r) => r.stopTime!);
  const horizon =
    spec.horizon ?? (stops.length > 0 ? 1.1 * Math.max(...stops) : 1.0);

  const sValues = rows.map((r) => r.s);
  const xAxis = linearAxis(
    Math.min(...sValues), Math.max(...sValues), MARGIN.left, WIDTH - MARGIN.right);
  const yHi = Math.max(horizon, ...stops, 0) * 1.15;
  const yAxis = linearAxis(0, yHi, HEIGHT - MARGIN.bottom, MARGIN.top);

  const fig = new Figure(
    spec.title ?? basename(spec.summaryPath),
    "metric exponent s",
    "stop time",
  );
  fig.axes(xAxis, yAxis);
  fig.dashedHLine(yAxis.scale(horizon), "horizon");
  const seen = new Map<string, string>();
  for (const row of rows) {
    const color = STATUS_COLORS[row.status] ?? "#7f7f7f";
    seen.set(row.status, color);
    if (row.stopTime !== null) {
      fig.circle(xAxis.scale(row.s), yAxis.scale(row.stopTime), color);
    } else {
      fig.triangle(xAxis.scale(row.s), yAxis.scale(horizon), color);
    }
  }
  fig.legend([...seen.entries()]);
  writeFileSync(spec.output, fig.render());
}
