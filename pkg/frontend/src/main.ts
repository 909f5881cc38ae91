#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { renderSweep } from "./sweep.js";
import { renderTimeseries } from "./timeseries.js";

export async function run(argv: string[]): Promise<number> {
  let failed = false;
  const parser = yargs(argv)
    .scriptName("plot")
    .command(
      "timeseries <csv>",
      "plot diagnostics columns against time",
      (y) =>
        y
          .positional("csv", { type: "string", demandOption: true })
          .option("cols", {
            type: "string",
            demandOption: true,
            describe: "comma-separated column names from the CSV header",
          })
          .option("out", { type: "string", demandOption: true })
          .option("log-y", { type: "boolean", default: false })
          .option("title", { type: "string" }),
      (args) => {
        renderTimeseries({
          csvPath: args.csv as string,
          columns: (args.cols as string).split(",").map((c) => c.trim()).filter(Boolean),
          output: args.out as string,
          logY: args["log-y"] as boolean,
          title: args.title as string | undefined,
        });
        console.log(`wrote ${args.out}`);
      },
    )
    .command(
      "sweep <summary>",
      "scatter stop times against the swept exponent",
      (y) =>
        y
          .positional("summary", { type: "string", demandOption: true })
          .option("out", { type: "string", demandOption: true })
          .option("horizon", { type: "number" })
          .option("title", { type: "string" }),
      (args) => {
        renderSweep({
          summaryPath: args.summary as string,
          output: args.out as string,
          horizon: args.horizon as number | undefined,
          title: args.title as string | undefined,
        });
        console.log(`wrote ${args.out}`);
      },
    )
    .demandCommand(1)
    .strict()
    .fail((msg, err) => {
      console.error(`error: ${err ? err.message : msg}`);
      failed = true;
    });
  try {
    await parser.parse();
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
  return failed ? 1 : 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  run(hideBin(process.argv)).then((code) => {
    process.exitCode = code;
  });
}
