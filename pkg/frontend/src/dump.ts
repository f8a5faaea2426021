/**
 * Dump the plotted series back to CSV, using the raw tokens captured at
 * parse time. Points come out in input-row order, so the dump of a table's
 * series equals the input's (axis, value, scheme, objective_db) projection
 * restricted to rows that actually carried a number — byte for byte.
 */

import { Series } from "./table";

export function dumpSeries(axis: string, series: Series[]): string {
  const points: { row: number; line: string }[] = [];
  for (const s of series) {
    s.rowIndex.forEach((row, i) => {
      points.push({
        row,
        line: `${axis},${s.rawValue[i]},${s.scheme},${s.rawObjective[i]}`,
      });
    });
  }
  points.sort((a, b) => a.row - b.row);
  const lines = ["axis,value,scheme,objective_db", ...points.map((p) => p.line)];
  return lines.join("\n") + "\n";
}
