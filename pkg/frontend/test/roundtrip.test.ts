import { mkdtempSync, readFileSync, readdirSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { fileURLToPath } from "url";

import { describe, expect, it } from "vitest";

import { renderChart } from "../src/chart";
import { dumpSeries } from "../src/dump";
import { run } from "../src/main";
import { extractSeries, readTable } from "../src/table";

const FIXTURES = fileURLToPath(new URL("../fixtures", import.meta.url));
const tables = readdirSync(FIXTURES).filter((f) => f.endsWith(".csv")).sort();

/** The (axis, value, scheme, objective_db) projection of the rows that carry
 * a plottable number, exactly as written in the file. */
function plottedProjection(path: string): string {
  const text = readFileSync(path, "utf8");
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  const header = lines[0].split(",");
  const at = (name: string) => header.indexOf(name);
  const picked = lines
    .slice(1)
    .map((l) => l.split(","))
    .filter((cells) => cells[at("objective_db")] !== "")
    .map((cells) =>
      [
        cells[at("axis")],
        cells[at("value")],
        cells[at("scheme")],
        cells[at("objective_db")],
      ].join(","),
    );
  return ["axis,value,scheme,objective_db", ...picked].join("\n") + "\n";
}

describe("every emitted table kind", () => {
  expect(tables.length).toBeGreaterThanOrEqual(5);

  it.each(tables)("%s renders without error", (name) => {
    const table = readTable(join(FIXTURES, name));
    const svg = renderChart(extractSeries(table), { xLabel: table.axis });
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg.endsWith("</svg>")).toBe(true);
    expect(svg).not.toContain("NaN");
  });

  it.each(tables)("%s series dump reproduces the input tokens", (name) => {
    const path = join(FIXTURES, name);
    const table = readTable(path);
    const dumped = dumpSeries(table.axis, extractSeries(table));
    expect(dumped).toBe(plottedProjection(path));
  });
});

describe("command line", () => {
  const out = mkdtempSync(join(tmpdir(), "plots-"));

  it("renders a scheme-comparison table and dumps its series", () => {
    const svgPath = join(out, "m0.svg");
    const dumpPath = join(out, "m0_series.csv");
    const table = join(FIXTURES, "m0_sweep.csv");
    expect(run([table, "m0", svgPath, "--dump", dumpPath])).toBe(0);
    const svg = readFileSync(svgPath, "utf8");
    expect(svg.match(/<polyline /g)).toHaveLength(5);
    expect(readFileSync(dumpPath, "utf8")).toBe(plottedProjection(table));
  });

  it("accepts the header-only table", () => {
    expect(run([join(FIXTURES, "empty.csv"), "m0", join(out, "empty.svg")])).toBe(0);
    expect(readFileSync(join(out, "empty.svg"), "utf8")).toContain("no data");
  });

  it("rejects a wrong axis name", () => {
    expect(run([join(FIXTURES, "m0_sweep.csv"), "b0", join(out, "x.svg")])).toBe(1);
  });

  it("rejects a table with a missing column", () => {
    const broken = join(out, "broken.csv");
    const text = readFileSync(join(FIXTURES, "m0_sweep.csv"), "utf8");
    writeFileSync(broken, text.replace("objective_db", "objective"));
    expect(run([broken, "m0", join(out, "y.svg")])).toBe(1);
  });

  it("rejects missing files and bad flags", () => {
    expect(run([join(out, "nope.csv"), "m0", join(out, "z.svg")])).toBe(1);
    expect(run([])).toBe(2);
    expect(run(["a.csv", "m0", "b.svg", "--frame"])).toBe(2);
    expect(run(["a.csv", "m0", "b.svg", "--dump"])).toBe(2);
  });
});
