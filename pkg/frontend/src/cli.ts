#!/usr/bin/env node
import { parseArgs } from "node:util";

import { renderAll, type Format } from "./render.js";

export async function main(argv: string[]): Promise<number> {
  let values;
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        in: { type: "string" },
        out: { type: "string" },
        format: { type: "string", default: "svg" },
      },
    }));
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
  if (!values.in || !values.out) {
    console.error("usage: render --in DIR --out DIR [--format png|svg]");
    return 1;
  }
  try {
    const written = await renderAll(values.in, values.out, values.format as Format);
    console.log(`wrote ${written.length} figures to ${values.out}`);
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

const entry = process.argv[1];
if (entry && (entry.endsWith("cli.js") || entry.endsWith("render"))) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
