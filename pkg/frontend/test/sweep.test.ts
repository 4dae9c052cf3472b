import assert from "node:assert/strict";
import { readFileSync } from "node:fs";
import { join } from "node:path";
import { test } from "node:test";
import { renderSweep } from "../src/sweep";
import { SchemaError } from "../src/csv";

const FIXTURES = join(__dirname, "..", "..", "test", "fixtures");

function fixture(name: string): string {
  return readFileSync(join(FIXTURES, name), "utf-8");
}

function countCurves(svg: string): number {
  return (svg.match(/class="curve"/g) ?? []).length;
}

function countErrorBars(svg: string): number {
  return (svg.match(/class="errorbar"/g) ?? []).length;
}

test("closed-system sweep renders one curve per (n_sites, mode)", () => {
  const svg = renderSweep([fixture("sweep_n2_closed.csv")]);
  assert.equal(countCurves(svg), 1);
  assert.equal(countErrorBars(svg), 0);
});

test("multi-file sweep gets a curve per (n_sites, mode) pair", () => {
  const svg = renderSweep([
    fixture("sweep_n2_closed.csv"),
    fixture("sweep_n3_dissipative.csv"),
  ]);
  // N=2 closed + N=3 {closed, dissipative, dissipative_pooled}
  assert.equal(countCurves(svg), 4);
  assert.ok(svg.includes('data-series="N=2 closed"'));
  assert.ok(svg.includes('data-series="N=3 dissipative"'));
  assert.ok(countErrorBars(svg) > 0);
});

test("rendering is a pure function of the input bytes", () => {
  const text = fixture("sweep_n3_dissipative.csv");
  assert.equal(renderSweep([text]), renderSweep([text]));
});

test("schema mismatch aborts with a column diff", () => {
  const bad = "delta_over_g,mode,variance\n0.001,closed,0.1\n";
  assert.throws(() => renderSweep([bad]), SchemaError);
  assert.throws(() => renderSweep([bad]), /missing: \[var_N_mid/);
});

test("synthetic stderr draws one bar per nonzero entry", () => {
  const csv =
    "delta_over_g,mode,var_N_mid,stderr,n_sites,filling\n" +
    "0.001,dissipative,0.1,0.01,3,1\n" +
    "0.01,dissipative,0.2,0,3,1\n" +
    "0.1,dissipative,0.3,0.02,3,1\n";
  const svg = renderSweep([csv]);
  assert.equal(countCurves(svg), 1);
  assert.equal(countErrorBars(svg), 2);
});
