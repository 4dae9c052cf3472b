import assert from "node:assert/strict";
import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { test } from "node:test";
import { renderTimeseries } from "../src/timeseries";
import { main as sweepMain } from "../src/cli-sweep";
import { main as timeseriesMain } from "../src/cli-timeseries";

const FIXTURES = join(__dirname, "..", "..", "test", "fixtures");

function fixture(name: string): string {
  return readFileSync(join(FIXTURES, name), "utf-8");
}

function countCurves(svg: string): number {
  return (svg.match(/class="curve"/g) ?? []).length;
}

test("blockade run renders one curve per (observable, case)", () => {
  const svg = renderTimeseries(fixture("timeseries_blockade.csv"));
  // two observables x two cases
  assert.equal(countCurves(svg), 4);
  assert.ok(svg.includes("P1_minus_mid [resonant]"));
  assert.ok(svg.includes("P2_minus_mid [detuned]"));
});

test("resonant-only input renders two curves", () => {
  const rows = fixture("timeseries_blockade.csv")
    .split("\n")
    .filter((line, i) => i === 0 || line.includes("resonant"));
  const svg = renderTimeseries(rows.join("\n"));
  assert.equal(countCurves(svg), 2);
});

test("schema mismatch is rejected", () => {
  assert.throws(
    () => renderTimeseries("time,value\n0,1\n"),
    /missing: \[t_times_A/
  );
});

test("cli plot-timeseries writes an SVG", () => {
  const out = join(mkdtempSync(join(tmpdir(), "fig-")), "ts.svg");
  const code = timeseriesMain([join(FIXTURES, "timeseries_blockade.csv"), "-o", out]);
  assert.equal(code, 0);
  const svg = readFileSync(out, "utf-8");
  assert.ok(svg.startsWith("<svg"));
  assert.equal(countCurves(svg), 4);
});

test("cli plot-sweep accepts several inputs", () => {
  const out = join(mkdtempSync(join(tmpdir(), "fig-")), "sweep.svg");
  const code = sweepMain([
    join(FIXTURES, "sweep_n2_closed.csv"),
    join(FIXTURES, "sweep_n3_dissipative.csv"),
    "-o",
    out,
  ]);
  assert.equal(code, 0);
  assert.ok(readFileSync(out, "utf-8").includes("</svg>"));
});

test("cli reports usage errors", () => {
  assert.equal(sweepMain([]), 2);
  assert.equal(timeseriesMain(["-o", "x.svg"]), 2);
});

test("cli reports schema failures with nonzero exit", () => {
  const dir = mkdtempSync(join(tmpdir(), "fig-"));
  const bad = join(dir, "bad.csv");
  require("node:fs").writeFileSync(bad, "a,b\n1,2\n");
  assert.equal(timeseriesMain([bad, "-o", join(dir, "o.svg")]), 1);
});
