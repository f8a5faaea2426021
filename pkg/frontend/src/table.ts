/**
 * Reader for the solver's fixed-layout result tables.
 *
 * Layout contract: `axis,value,scheme,objective_db,gain_db_u1..uK,feasible,
 * runtime_ms,seed`, one row per (axis value, scheme). Cells are plain tokens
 * (the writer never quotes), and empty cells mean "no value" — an infeasible
 * scheme leaves `objective_db` blank, an unserved user leaves their gain
 * blank.
 *
 * Parsing keeps the raw string tokens untouched so that anything plotted can
 * be dumped back out byte-identical to the input.
 */

import { readFileSync } from "fs";

export const REQUIRED_COLUMNS = [
  "axis",
  "value",
  "scheme",
  "objective_db",
  "feasible",
  "runtime_ms",
  "seed",
] as const;

export interface ResultTable {
  /** Column names, in file order. */
  header: string[];
  /** Raw cell tokens, one array per data row, no numeric coercion. */
  rows: string[][];
  /** The (single) value of the `axis` column; "" for a header-only file. */
  axis: string;
  /** Names of the per-user gain columns, in file order. */
  gainColumns: string[];
}

/** One plottable line: a scheme's points in input order, with raw tokens. */
export interface Series {
  scheme: string;
  x: number[];
  y: number[];
  /** Raw `value` tokens, parallel to x. */
  rawValue: string[];
  /** Raw `objective_db` tokens, parallel to y. */
  rawObjective: string[];
  /** Index of the source row in `ResultTable.rows`, parallel to x. */
  rowIndex: number[];
}

export function parseTable(text: string): ResultTable {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error("empty file: expected a header row");
  }
  const header = lines[0].split(",");
  for (const col of REQUIRED_COLUMNS) {
    if (!header.includes(col)) {
      throw new Error(
        `missing required column '${col}' (found: ${header.join(", ")})`,
      );
    }
  }
  const gainColumns = header.filter((h) => h.startsWith("gain_db_u"));
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new Error(
        `row ${i + 2} has ${cells.length} cells, the header has ${header.length}`,
      );
    }
    return cells;
  });
  const axisAt = header.indexOf("axis");
  const axes = new Set(rows.map((r) => r[axisAt]));
  if (axes.size > 1) {
    throw new Error(`mixed axis values: ${[...axes].sort().join(", ")}`);
  }
  return {
    header,
    rows,
    axis: rows.length > 0 ? rows[0][axisAt] : "",
    gainColumns,
  };
}

export function readTable(path: string): ResultTable {
  return parseTable(readFileSync(path, "utf8"));
}

/**
 * Group the table into one series per scheme (first-appearance order).
 * Rows with an empty `objective_db` cell carry no number and contribute no
 * point; rows with non-numeric tokens are an error.
 */
export function extractSeries(table: ResultTable): Series[] {
  const valueAt = table.header.indexOf("value");
  const schemeAt = table.header.indexOf("scheme");
  const objectiveAt = table.header.indexOf("objective_db");
  const order: string[] = [];
  const byScheme = new Map<string, Series>();
  table.rows.forEach((row, i) => {
    const scheme = row[schemeAt];
    let series = byScheme.get(scheme);
    if (series === undefined) {
      series = { scheme, x: [], y: [], rawValue: [], rawObjective: [], rowIndex: [] };
      byScheme.set(scheme, series);
      order.push(scheme);
    }
    const objectiveToken = row[objectiveAt];
    if (objectiveToken === "") {
      return; // nothing to plot for this row
    }
    const x = Number(row[valueAt]);
    const y = Number(objectiveToken);
    if (!Number.isFinite(x)) {
      throw new Error(`row ${i + 2}: non-numeric value '${row[valueAt]}'`);
    }
    if (!Number.isFinite(y)) {
      throw new Error(`row ${i + 2}: non-numeric objective_db '${objectiveToken}'`);
    }
    series.x.push(x);
    series.y.push(y);
    series.rawValue.push(row[valueAt]);
    series.rawObjective.push(objectiveToken);
    series.rowIndex.push(i);
  });
  return order.map((scheme) => byScheme.get(scheme)!);
}
