import { describe, expect, it } from "vitest";

import { formatTick, niceTicks, renderChart } from "../src/chart";
import { Series, extractSeries, parseTable } from "../src/table";

function line(scheme: string, x: number[], y: number[]): Series {
  return {
    scheme,
    x,
    y,
    rawValue: x.map(String),
    rawObjective: y.map(String),
    rowIndex: x.map((_, i) => i),
  };
}

describe("niceTicks", () => {
  it("uses a 1-2-5 step that covers the range", () => {
    expect(niceTicks(0, 10, 6)).toEqual([0, 2, 4, 6, 8, 10]);
    expect(niceTicks(-70, -45, 6)).toEqual([-70, -65, -60, -55, -50, -45]);
  });

  it("pads a degenerate range instead of dividing by zero", () => {
    const ticks = niceTicks(5, 5);
    expect(ticks.length).toBeGreaterThan(1);
    expect(Math.min(...ticks)).toBeLessThanOrEqual(5);
    expect(Math.max(...ticks)).toBeGreaterThanOrEqual(5);
  });

  it("prints ticks without float noise", () => {
    expect(formatTick(0.30000000000000004)).toBe("0.3");
    expect(formatTick(-57.5)).toBe("-57.5");
  });
});

describe("renderChart", () => {
  const schemes = ["maxmin", "sequential", "min_pathloss", "max_beam_gain"];
  const four = schemes.map((s, k) =>
    line(s, [8, 16, 24], [-70 - k, -57 - k, -47 - k]),
  );

  it("draws one polyline and legend entry per scheme", () => {
    const svg = renderChart(four, { xLabel: "m0" });
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg.endsWith("</svg>")).toBe(true);
    expect(svg.match(/<polyline /g)).toHaveLength(4);
    expect(svg.match(/<circle /g)).toHaveLength(12);
    for (const s of schemes) {
      expect(svg).toContain(`>${s}</text>`);
    }
    expect(svg).not.toContain("NaN");
  });

  it("dashes the continuous-phase reference line", () => {
    const svg = renderChart(
      [line("maxmin", [1, 2], [-50, -48]), line("continuous", [1, 2], [-47, -47])],
      {},
    );
    const dashed = svg
      .split("\n")
      .filter((l) => l.includes("<polyline") && l.includes("stroke-dasharray"));
    expect(dashed).toHaveLength(1);
  });

  it("renders an empty table as an axes box with a note", () => {
    const svg = renderChart([], {});
    expect(svg).toContain("no data");
    expect(svg).not.toContain("NaN");
  });

  it("handles single points and constant series", () => {
    const svg = renderChart(
      [line("cascade", [2.5], [-44.5]), line("interference", [2.5, 3, 3.5], [-80, -80, -80])],
      {},
    );
    expect(svg).not.toContain("NaN");
    expect(svg.match(/<circle /g)).toHaveLength(4);
  });

  it("drops series with no plottable points rather than crashing", () => {
    const table = parseTable(
      [
        "axis,value,scheme,objective_db,feasible,runtime_ms,seed",
        "alpha,2.500000,cascade,-78.664739,,2,0",
        "alpha,2.500000,interference,,,2,0",
      ].join("\n"),
    );
    const svg = renderChart(extractSeries(table), {});
    expect(svg.match(/<polyline /g)).toHaveLength(1);
    expect(svg).not.toContain(">interference</text>");
  });

  it("escapes markup in labels", () => {
    const svg = renderChart([line("a<b", [1, 2], [0, 1])], { title: 'x & "y"' });
    expect(svg).toContain("a&lt;b");
    expect(svg).toContain("x &amp; &quot;y&quot;");
  });
});
