import { writeFileSync } from "node:fs";
import { basename } from "node:path";
import { numericColumn, readTable } from "./csv.js";
import { Figure, HEIGHT, MARGIN, PALETTE, WIDTH, linearAxis, logAxis } from "./svg.js";

export interface TimeseriesSpec {
  csvPath: string;
  columns: string[];
  output: string;
  logY?: boolean;
  title?: string;
  xColumn?: string;
}

export function renderTimeseries(spec: TimeseriesSpec): void {
  const table = readTable(spec.csvPath);
  const xName = spec.xColumn ?? "t";
  const xs = numericColumn(table, xName);
  const series = spec.columns.map((name) => ({
    name,
    values: numericColumn(table, name),
  }));

  let yLo = Infinity;
  let yHi = -Infinity;
  let xLo = Infinity;
  let xHi = -Infinity;
  for (const s of series) {
    for (let i = 0; i < xs.length; i++) {
      const x = xs[i];
      const y = s.values[i];
      if (x === null || y === null) continue;
      if (spec.logY && y <= 0) continue;
      xLo = Math.min(xLo, x);
      xHi = Math.max(xHi, x);
      yLo = Math.min(yLo, y);
      yHi = Math.max(yHi, y);
    }
  }
  if (!Number.isFinite(yLo)) {
    throw new Error("no plottable values in the requested columns");
  }

  const xAxis = linearAxis(xLo, xHi, MARGIN.left, WIDTH - MARGIN.right);
  const yAxis = spec.logY
    ? logAxis(yLo, yHi, HEIGHT - MARGIN.bottom, MARGIN.top)
    : linearAxis(yLo, yHi, HEIGHT - MARGIN.bottom, MARGIN.top);

  const fig = new Figure(
    spec.title ?? basename(spec.csvPath),
    xName,
    spec.columns.join(", "),
  );
  fig.axes(xAxis, yAxis);
  series.forEach((s, i) => {
    const pts: [number, number][] = [];
    for (let j = 0; j < xs.length; j++) {
      const x = xs[j];
      const y = s.values[j];
      if (x === null || y === null || (spec.logY && y <= 0)) continue;
      pts.push([xAxis.scale(x), yAxis.scale(y)]);
    }
    fig.polyline(pts, PALETTE[i % PALETTE.length]);
  });
  fig.legend(series.map((s, i) => [s.name, PALETTE[i % PALETTE.length]]));
  writeFileSync(spec.output, fig.render());
}
