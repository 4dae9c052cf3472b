/**
 * Population time-series figure: one curve per (observable, case) on linear
 * axes, time measured in hopping periods.
 */
import { checkSchema, parseCsv, toNumber } from "./csv";
import { renderPlot, Series } from "./svg";

export const TIMESERIES_COLUMNS = [
  "t_times_A",
  "observable_label",
  "value",
  "case",
] as const;

interface TimeseriesRow {
  time: number;
  label: string;
  value: number;
  caseName: string;
}

export function readTimeseriesRows(text: string): TimeseriesRow[] {
  const table = parseCsv(text);
  checkSchema(table, TIMESERIES_COLUMNS);
  return table.rows.map((cells) => ({
    time: toNumber(cells[0], "t_times_A"),
    label: cells[1],
    value: toNumber(cells[2], "value"),
    caseName: cells[3],
  }));
}

export function renderTimeseries(text: string): string {
  const rows = readTimeseriesRows(text);
  const groups = new Map<string, TimeseriesRow[]>();
  for (const row of rows) {
    const key = `${row.label} [${row.caseName}]`;
    const bucket = groups.get(key);
    if (bucket) {
      bucket.push(row);
    } else {
      groups.set(key, [row]);
    }
  }
  const labels = [...groups.keys()].sort();
  const series: Series[] = labels.map((label) => ({
    label,
    points: groups
      .get(label)!
      .slice()
      .sort((a, b) => a.time - b.time)
      .map((r) => ({ x: r.time, y: r.value })),
  }));
  return renderPlot({
    title: "Probe-cavity populations",
    xLabel: "t * A",
    yLabel: "probability",
    series,
  });
}
