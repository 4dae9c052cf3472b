/**
 * Order-parameter sweep figure: var(N_mid) against the detuning on a log
 * axis, one curve per (n_sites, mode), error bars where stderr > 0.
 */
import { checkSchema, parseCsv, toNumber } from "./csv";
import { renderPlot, Series } from "./svg";

export const SWEEP_COLUMNS = [
  "delta_over_g",
  "mode",
  "var_N_mid",
  "stderr",
  "n_sites",
  "filling",
] as const;

interface SweepRow {
  delta: number;
  mode: string;
  variance: number;
  stderr: number;
  nSites: number;
}

export function readSweepRows(text: string): SweepRow[] {
  const table = parseCsv(text);
  checkSchema(table, SWEEP_COLUMNS);
  return table.rows.map((cells) => ({
    delta: toNumber(cells[0], "delta_over_g"),
    mode: cells[1],
    variance: toNumber(cells[2], "var_N_mid"),
    stderr: toNumber(cells[3], "stderr"),
    nSites: toNumber(cells[4], "n_sites"),
  }));
}

/** Group rows from one or more sweep CSVs into one figure. */
export function renderSweep(texts: string[]): string {
  const rows = texts.flatMap(readSweepRows);
  const groups = new Map<string, SweepRow[]>();
  for (const row of rows) {
    const key = `N=${row.nSites} ${row.mode}`;
    const bucket = groups.get(key);
    if (bucket) {
      bucket.push(row);
    } else {
      groups.set(key, [row]);
    }
  }
  const labels = [...groups.keys()].sort();
  const series: Series[] = labels.map((label) => {
    const pts = groups
      .get(label)!
      .slice()
      .sort((a, b) => a.delta - b.delta)
      .map((r) => ({ x: r.delta, y: r.variance, yerr: r.stderr }));
    return { label, points: pts };
  });
  return renderPlot({
    title: "Excitation-number variance of the probe cavity",
    xLabel: "detuning / g",
    yLabel: "var(N_mid)",
    logX: true,
    series,
  });
}
