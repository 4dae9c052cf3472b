/**
 * Strict CSV reading for the simulator's output schemas.
 *
 * The producer writes plain comma-separated values without quoting, one
 * header row, LF line endings. Schema violations abort with a column diff.
 */

export class SchemaError extends Error {}

export interface Table {
  columns: string[];
  rows: string[][];
}

export function parseCsv(text: string): Table {
  const lines = text
    .split(/\r?\n/)
    .filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty CSV input");
  }
  const columns = lines[0].split(",");
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== columns.length) {
      throw new SchemaError(
        `row ${i + 2} has ${cells.length} cells, expected ${columns.length}`
      );
    }
    return cells;
  });
  return { columns, rows };
}

/** Require the exact column set and order; report missing/unexpected names. */
export function checkSchema(table: Table, expected: readonly string[]): void {
  const got = table.columns;
  if (got.length === expected.length && expected.every((c, i) => got[i] === c)) {
    return;
  }
  const missing = expected.filter((c) => !got.includes(c));
  const unexpected = got.filter((c) => !expected.includes(c));
  const parts = [
    `expected columns [${expected.join(", ")}]`,
    `got [${got.join(", ")}]`,
  ];
  if (missing.length > 0) parts.push(`missing: [${missing.join(", ")}]`);
  if (unexpected.length > 0) parts.push(`unexpected: [${unexpected.join(", ")}]`);
  if (missing.length === 0 && unexpected.length === 0) {
    parts.push("column order differs");
  }
  throw new SchemaError(parts.join("; "));
}

export function toNumber(cell: string, column: string): number {
  const value = Number(cell);
  if (!Number.isFinite(value)) {
    throw new SchemaError(`non-numeric value ${JSON.stringify(cell)} in column ${column}`);
  }
  return value;
}
