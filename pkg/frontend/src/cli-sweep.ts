#!/usr/bin/env node
/** plot-sweep <sweep.csv...> -o <out.svg> */
import { readFileSync, writeFileSync } from "node:fs";
import { renderSweep } from "./sweep";

export function main(argv: string[]): number {
  const inputs: string[] = [];
  let out = "";
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "-o" || argv[i] === "--out") {
      out = argv[++i] ?? "";
    } else {
      inputs.push(argv[i]);
    }
  }
  if (inputs.length === 0 || out === "") {
    console.error("usage: plot-sweep <sweep.csv...> -o <out.svg>");
    return 2;
  }
  try {
    const svg = renderSweep(inputs.map((p) => readFileSync(p, "utf-8")));
    writeFileSync(out, svg);
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
  console.log(out);
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
