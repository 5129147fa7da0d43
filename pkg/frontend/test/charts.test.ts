import { describe, expect, it } from "vitest";

import {
  breakEvenMarker,
  formatUsd,
  formatVolume,
  groupByModel,
  linearScale,
  logScale,
  renderChart,
  seriesPaths,
} from "../src/charts";
import type { CurveRow } from "../src/types";

const ROWS: CurveRow[] = [
  { volume: 1000, model: "supervised", tco_usd: 11616.04, ccd_usd: 12.7369 },
  { volume: 1000, model: "gemini-flash-2.5", tco_usd: 0.25, ccd_usd: 0.000365 },
  { volume: 100000000, model: "supervised", tco_usd: 15616, ccd_usd: 0.000171 },
  { volume: 100000000, model: "gemini-flash-2.5", tco_usd: 25000, ccd_usd: 0.000365 },
];

describe("scales", () => {
  it("log scale maps decades evenly", () => {
    const x = logScale(1_000, 100_000_000, 0, 100);
    expect(x(1_000)).toBeCloseTo(0);
    expect(x(100_000_000)).toBeCloseTo(100);
    expect(x(1_000_000)).toBeCloseTo(60); // 3 of 5 decades
  });

  it("linear scale endpoints", () => {
    const y = linearScale(0, 10, 200, 0);
    expect(y(0)).toBe(200);
    expect(y(10)).toBe(0);
  });
});

describe("series", () => {
  it("groups rows by model preserving order", () => {
    const groups = groupByModel(ROWS);
    expect([...groups.keys()]).toEqual(["supervised", "gemini-flash-2.5"]);
    expect(groups.get("supervised")).toHaveLength(2);
  });

  it("builds one SVG path per model", () => {
    const x = logScale(1_000, 100_000_000, 0, 100);
    const y = linearScale(0, 30000, 100, 0);
    const paths = seriesPaths(ROWS, (r) => r.tco_usd, x, y);
    expect(paths).toHaveLength(2);
    expect(paths[0]!.path.startsWith("M")).toBe(true);
    expect(paths[0]!.path).toContain("L");
  });
});

describe("break-even marker", () => {
  const x = logScale(1_000, 200_000_000, 0, 560);

  it("positions the marker at the reported volume", () => {
    const marker = breakEvenMarker(
      { volume: 55_314_285.71, daily_for_one_year: 151_545.99, cost_margin: 0.00021 },
      x,
    );
    expect(marker.visible).toBe(true);
    expect(marker.x).toBeCloseTo(x(55_314_285.71));
    expect(marker.label).toContain("55.3M");
  });

  it("no finite break-even hides the marker with a notice", () => {
    const marker = breakEvenMarker(null, x);
    expect(marker.visible).toBe(false);
    expect(marker.label).toBe("no finite break-even");
  });

  it("marker outside the charted range is hidden", () => {
    const marker = breakEvenMarker(
      { volume: 5e12, daily_for_one_year: 1.4e10, cost_margin: 1e-9 },
      x,
    );
    expect(marker.visible).toBe(false);
  });
});

describe("chart assembly", () => {
  it("embeds the marker with the service volume as a data attribute", () => {
    const breakeven = { volume: 55_314_285.71, daily_for_one_year: 151_546, cost_margin: 0.00021 };
    const chart = renderChart(ROWS, (r) => r.tco_usd, breakeven, "tco");
    expect(chart.svg).toContain('data-role="breakeven-marker"');
    expect(chart.svg).toContain('data-volume="55314285.71"');
    expect(chart.legend.map((l) => l.model)).toEqual(["supervised", "gemini-flash-2.5"]);
  });

  it("omits the marker when the service reports none", () => {
    const chart = renderChart(ROWS, (r) => r.tco_usd, null, "tco");
    expect(chart.svg).not.toContain("breakeven-marker");
  });
});

describe("formatting", () => {
  it("volumes", () => {
    expect(formatVolume(55_314_286)).toBe("55.3M");
    expect(formatVolume(151_546)).toBe("152K");
    expect(formatVolume(500)).toBe("500");
  });

  it("dollars", () => {
    expect(formatUsd(228125)).toBe("$228,125");
    expect(formatUsd(25)).toBe("$25.00");
    expect(formatUsd(0.000365)).toBe("$0.000365");
  });
});
