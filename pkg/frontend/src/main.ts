/**
 * Render a solver sweep table as an SVG line chart.
 *
 * Usage:
 *   node dist/main.js <table.csv> <axis-name> <out.svg> [--dump <series.csv>]
 *                     [--title <text>]
 *
 * The axis name must match the table's `axis` column; `--dump` additionally
 * writes the plotted series back out as CSV with the input's exact tokens.
 * Exit codes: 0 success, 1 unreadable or inconsistent table, 2 usage error.
 */

import { writeFileSync } from "fs";

import { renderChart } from "./chart";
import { dumpSeries } from "./dump";
import { extractSeries, readTable } from "./table";

const USAGE =
  "usage: main.js <table.csv> <axis-name> <out.svg> " +
  "[--dump <series.csv>] [--title <text>]";

export function run(argv: string[]): number {
  const positional: string[] = [];
  let dumpPath: string | undefined;
  let title: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--dump" || arg === "--title") {
      const value = argv[++i];
      if (value === undefined) {
        console.error(`error: ${arg} needs a value\n${USAGE}`);
        return 2;
      }
      if (arg === "--dump") {
        dumpPath = value;
      } else {
        title = value;
      }
    } else if (arg.startsWith("-")) {
      console.error(`error: unknown flag '${arg}'\n${USAGE}`);
      return 2;
    } else {
      positional.push(arg);
    }
  }
  if (positional.length !== 3) {
    console.error(`error: expected 3 arguments, got ${positional.length}\n${USAGE}`);
    return 2;
  }
  const [tablePath, axis, outPath] = positional;

  try {
    const table = readTable(tablePath);
    if (table.rows.length > 0 && table.axis !== axis) {
      throw new Error(
        `table sweeps '${table.axis}', not '${axis}'; pass the matching axis name`,
      );
    }
    const series = extractSeries(table);
    const svg = renderChart(series, {
      title,
      xLabel: axis,
      yLabel: "gain (dB)",
    });
    writeFileSync(outPath, svg + "\n");
    const nPoints = series.reduce((n, s) => n + s.x.length, 0);
    console.log(`wrote ${outPath} (${series.length} series, ${nPoints} points)`);
    if (dumpPath !== undefined) {
      writeFileSync(dumpPath, dumpSeries(axis, series));
      console.log(`wrote ${dumpPath}`);
    }
    return 0;
  } catch (exc) {
    console.error(`error: ${exc instanceof Error ? exc.message : exc}`);
    return 1;
  }
}

if (typeof require !== "undefined" && require.main === module) {
  process.exit(run(process.argv.slice(2)));
}
